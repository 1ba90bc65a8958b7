use std::path::PathBuf;

use trine_core::ac23::Ac23Error;
use trine_core::color::ParseColoringError;
use trine_core::dynamics::DynamicsError;
use trine_core::graph::GraphError;
use trine_core::ipf::IpfError;
use trine_core::rt::RtError;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("invalid graph: {0}")]
    Graph(#[from] GraphError),
    #[error("invalid coloring: {0}")]
    Coloring(#[from] ParseColoringError),
    #[error(transparent)]
    Dynamics(#[from] DynamicsError),
    #[error(transparent)]
    Ipf(#[from] IpfError),
    #[error(transparent)]
    Search(#[from] Ac23Error),
    #[error(transparent)]
    Table(#[from] RtError),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("invalid configuration: {0}")]
    Config(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn io_at(path: impl Into<PathBuf>) -> impl FnOnce(std::io::Error) -> Error {
    let path = path.into();
    move |source| Error::Io { path, source }
}

pub(crate) fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, message: message.into() }
}
