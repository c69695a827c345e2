//! Domain ontology: classes, object properties, data properties, and the
//! subclass hierarchy.
//!
//! The file format is a JSON object:
//! `{classes:[..], object_properties:[{name,domain,range}], data_properties:[{name,domain}], subclass:[{child,parent}]}`.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ObjectProperty {
    pub name: String,
    pub domain: String,
    pub range: String,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DataProperty {
    pub name: String,
    pub domain: String,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SubclassEdge {
    pub child: String,
    pub parent: String,
}

/// A domain ontology. The subclass hierarchy is stored but matching elsewhere
/// uses exact class-name equality.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Ontology {
    pub classes: BTreeSet<String>,
    pub object_properties: BTreeSet<ObjectProperty>,
    pub data_properties: BTreeSet<DataProperty>,
    #[serde(default)]
    pub subclass: BTreeSet<SubclassEdge>,
}

impl Ontology {
    pub fn load(path: &Path) -> Result<Ontology> {
        let text = std::fs::read_to_string(path)?;
        Ontology::from_json(&text)
    }

    pub fn from_json(text: &str) -> Result<Ontology> {
        let onto: Ontology = serde_json::from_str(text)?;
        onto.validate()?;
        Ok(onto)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let text = serde_json::to_string_pretty(self)?;
        std::fs::write(path, text)?;
        Ok(())
    }

    /// Checks referential integrity and that the subclass relation is acyclic.
    pub fn validate(&self) -> Result<()> {
        for p in &self.object_properties {
            for class in [&p.domain, &p.range] {
                if !self.classes.contains(class) {
                    return Err(Error::Ontology(format!(
                        "object property '{}' references undeclared class '{}'",
                        p.name, class
                    )));
                }
            }
        }
        for p in &self.data_properties {
            if !self.classes.contains(&p.domain) {
                return Err(Error::Ontology(format!(
                    "data property '{}' references undeclared class '{}'",
                    p.name, p.domain
                )));
            }
        }
        for e in &self.subclass {
            for class in [&e.child, &e.parent] {
                if !self.classes.contains(class) {
                    return Err(Error::Ontology(format!(
                        "subclass edge references undeclared class '{class}'"
                    )));
                }
            }
        }
        self.check_subclass_acyclic()
    }

    fn check_subclass_acyclic(&self) -> Result<()> {
        let mut parents: BTreeMap<&str, Vec<&str>> = BTreeMap::new();
        for e in &self.subclass {
            parents.entry(e.child.as_str()).or_default().push(e.parent.as_str());
        }
        // Colors: 0 unvisited, 1 on stack, 2 done.
        let mut color: BTreeMap<&str, u8> = BTreeMap::new();
        fn visit<'a>(
            node: &'a str,
            parents: &BTreeMap<&'a str, Vec<&'a str>>,
            color: &mut BTreeMap<&'a str, u8>,
        ) -> bool {
            match color.get(node) {
                Some(1) => return false,
                Some(2) => return true,
                _ => {}
            }
            color.insert(node, 1);
            if let Some(ps) = parents.get(node) {
                for p in ps {
                    if !visit(p, parents, color) {
                        return false;
                    }
                }
            }
            color.insert(node, 2);
            true
        }
        for class in self.classes.iter() {
            if !visit(class.as_str(), &parents, &mut color) {
                return Err(Error::Ontology(format!(
                    "subclass cycle involving class '{class}'"
                )));
            }
        }
        Ok(())
    }

    pub fn has_class(&self, class: &str) -> bool {
        self.classes.contains(class)
    }

    pub fn has_object_property(&self, name: &str, domain: &str, range: &str) -> bool {
        self.object_properties.contains(&ObjectProperty {
            name: name.to_string(),
            domain: domain.to_string(),
            range: range.to_string(),
        })
    }

    pub fn has_data_property(&self, name: &str, domain: &str) -> bool {
        self.data_properties.contains(&DataProperty {
            name: name.to_string(),
            domain: domain.to_string(),
        })
    }

    /// Object properties declared between two specific classes.
    pub fn object_properties_between<'a>(
        &'a self,
        domain: &'a str,
        range: &'a str,
    ) -> impl Iterator<Item = &'a ObjectProperty> {
        self.object_properties
            .iter()
            .filter(move |p| p.domain == domain && p.range == range)
    }

    /// Distinct object property names, sorted.
    pub fn property_names(&self) -> Vec<&str> {
        let names: BTreeSet<&str> = self.object_properties.iter().map(|p| p.name.as_str()).collect();
        names.into_iter().collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn onto_json(classes: &[&str], props: &[(&str, &str, &str)]) -> String {
        let classes: Vec<String> = classes.iter().map(|s| s.to_string()).collect();
        let obj: Vec<serde_json::Value> = props
            .iter()
            .map(|(n, d, r)| serde_json::json!({"name": n, "domain": d, "range": r}))
            .collect();
        serde_json::json!({
            "classes": classes,
            "object_properties": obj,
            "data_properties": [],
            "subclass": [],
        })
        .to_string()
    }

    #[test]
    fn empty_ontology_is_valid() {
        let onto = Ontology::from_json(&onto_json(&[], &[])).unwrap();
        assert!(onto.classes.is_empty());
        assert!(onto.object_properties.is_empty());
    }

    #[test]
    fn undeclared_domain_class_rejected() {
        let text = onto_json(&["A"], &[("p", "E99_Missing", "A")]);
        let err = Ontology::from_json(&text).unwrap_err();
        assert!(err.to_string().contains("E99_Missing"));
    }

    #[test]
    fn counts_match_document() {
        // Synthetic export at the scale of a real cultural-heritage ontology:
        // 83 classes, 270 properties.
        let classes: Vec<String> = (0..83).map(|i| format!("E{i}_Class")).collect();
        let mut object_properties = Vec::new();
        let mut data_properties = Vec::new();
        for i in 0..200 {
            object_properties.push(serde_json::json!({
                "name": format!("P{i}_rel"),
                "domain": classes[i % 83],
                "range": classes[(i * 7 + 1) % 83],
            }));
        }
        for i in 0..70 {
            data_properties.push(serde_json::json!({
                "name": format!("D{i}_attr"),
                "domain": classes[i % 83],
            }));
        }
        let text = serde_json::json!({
            "classes": classes,
            "object_properties": object_properties,
            "data_properties": data_properties,
        })
        .to_string();
        let onto = Ontology::from_json(&text).unwrap();
        assert_eq!(onto.classes.len(), 83);
        assert_eq!(onto.object_properties.len() + onto.data_properties.len(), 270);
    }

    #[test]
    fn subclass_cycle_rejected() {
        let text = serde_json::json!({
            "classes": ["A", "B"],
            "object_properties": [],
            "data_properties": [],
            "subclass": [{"child": "A", "parent": "B"}, {"child": "B", "parent": "A"}],
        })
        .to_string();
        let err = Ontology::from_json(&text).unwrap_err();
        assert!(err.to_string().contains("cycle"));
    }

    #[test]
    fn round_trip() {
        let text = serde_json::json!({
            "classes": ["A", "B", "C"],
            "object_properties": [{"name": "p", "domain": "A", "range": "B"}],
            "data_properties": [{"name": "label", "domain": "B"}],
            "subclass": [{"child": "B", "parent": "A"}],
        })
        .to_string();
        let onto = Ontology::from_json(&text).unwrap();
        let again = Ontology::from_json(&serde_json::to_string(&onto).unwrap()).unwrap();
        assert_eq!(onto, again);
    }
}
