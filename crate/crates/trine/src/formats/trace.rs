use serde::{Deserialize, Serialize};
use trine_core::RunRecord;

use super::csv_string;
use crate::error::Result;

/// `t,coloring` for `t = 1..=T`, then the mirror state at `T + 1`.
pub fn trace_csv(run: &RunRecord) -> Result<String> {
    csv_string(|w| {
        w.write_record(["t", "coloring"])?;
        for (i, s) in run.states.iter().enumerate() {
            w.write_record([(i + 1).to_string(), s.to_string()])?;
        }
        w.write_record([(run.period() + 1).to_string(), run.summary.mirror_state.to_string()])
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct RunJson {
    pub start: String,
    #[serde(rename = "T")]
    pub t: usize,
    pub degenerate: bool,
    pub states: Vec<String>,
    pub mirror: String,
    pub lambda: Vec<i64>,
    pub n_a: Vec<u32>,
    pub n_b: Vec<u32>,
    pub n_c: Vec<u32>,
}

impl From<&RunRecord> for RunJson {
    fn from(run: &RunRecord) -> Self {
        let s = &run.summary;
        RunJson {
            start: s.start_ab.to_string(),
            t: s.period,
            degenerate: s.is_degenerate(),
            states: run.states.iter().map(|c| c.to_string()).collect(),
            mirror: s.mirror_state.to_string(),
            lambda: s.lambdas().iter().map(|l| l.0).collect(),
            n_a: s.counts.iter().map(|c| c.a).collect(),
            n_b: s.counts.iter().map(|c| c.b).collect(),
            n_c: s.counts.iter().map(|c| c.c).collect(),
        }
    }
}

pub fn run_json(run: &RunRecord) -> String {
    let mut s = serde_json::to_string_pretty(&RunJson::from(run)).expect("run serializes");
    s.push('\n');
    s
}
