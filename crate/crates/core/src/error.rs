use thiserror::Error;

/// Errors produced by any stage of the pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),

    #[error("invalid ontology: {0}")]
    Ontology(String),

    #[error("invalid source table: {0}")]
    Source(String),

    #[error("invalid semantic model: {0}")]
    Model(String),

    #[error("invalid knowledge graph{}: {msg}", fmt_line(.line))]
    KnowledgeGraph { line: Option<usize>, msg: String },

    #[error("labeling error: {0}")]
    Labeling(String),

    #[error("alignment error: {0}")]
    Alignment(String),

    #[error("steiner error: attribute '{attribute}' cannot be connected: {msg}")]
    DisconnectedTerminal { attribute: String, msg: String },

    #[error("steiner error: {0}")]
    Steiner(String),

    #[error("disambiguation error: {0}")]
    Disambiguation(String),

    #[error("correction error: {0}")]
    Correction(String),

    #[error("all candidate semantic types eliminated for column '{column}'")]
    AllCandidatesEliminated { column: String },

    #[error("evaluation error: {0}")]
    Evaluation(String),

    #[error("fixture error: {0}")]
    Fixture(String),

    #[error("config error: {0}")]
    Config(String),

    #[error("stage '{stage}' failed: {source}")]
    Stage {
        stage: &'static str,
        #[source]
        source: Box<Error>,
    },
}

fn fmt_line(line: &Option<usize>) -> String {
    match line {
        Some(n) => format!(" (line {n})"),
        None => String::new(),
    }
}

impl Error {
    pub fn in_stage(self, stage: &'static str) -> Error {
        Error::Stage {
            stage,
            source: Box::new(self),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
