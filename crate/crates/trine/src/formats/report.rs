use serde::{Deserialize, Serialize};
use trine_core::ac23::{MaskVerdict, VerdictGrid};
use trine_core::ipf::{IpfReport, Witness};

use super::csv_string;
use crate::error::Result;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct IpfReportJson {
    #[serde(rename = "T")]
    pub t: usize,
    #[serde(rename = "Tbar")]
    pub t_bar: usize,
    pub lambda: i64,
    pub lambda_bar: i64,
    pub lambda_uniform: bool,
    #[serde(rename = "K")]
    pub k: usize,
    pub div3: bool,
    pub c1: Option<bool>,
    pub c2: Option<bool>,
    pub c3: Option<bool>,
    pub c4: Option<bool>,
    pub c5: Option<bool>,
    pub c6: Option<bool>,
    pub c7: Option<bool>,
    pub c8: Option<bool>,
    pub light: bool,
    pub full: bool,
    /// `[1]` under the raw and complemented readings.
    pub c1_raw: bool,
    pub c1_complemented: bool,
    /// `[8]` under time origins 0 and 1.
    pub c8_origin0: Option<bool>,
    pub c8_origin1: Option<bool>,
    pub slots_consistent: Option<bool>,
    pub witnesses: Vec<Witness>,
}

impl From<&IpfReport> for IpfReportJson {
    fn from(r: &IpfReport) -> Self {
        IpfReportJson {
            t: r.t,
            t_bar: r.t_bar,
            lambda: r.lambda.0,
            lambda_bar: r.lambda_bar.0,
            lambda_uniform: r.lambda_uniform,
            k: r.k,
            div3: r.div3,
            c1: r.cond[0],
            c2: r.cond[1],
            c3: r.cond[2],
            c4: r.cond[3],
            c5: r.cond[4],
            c6: r.cond[5],
            c7: r.cond[6],
            c8: r.cond[7],
            light: r.light_ok(),
            full: r.full_ok(),
            c1_raw: r.cond1_readings[0],
            c1_complemented: r.cond1_readings[1],
            c8_origin0: r.cond8_origins[0],
            c8_origin1: r.cond8_origins[1],
            slots_consistent: r.slots_consistent,
            witnesses: r.witnesses.clone(),
        }
    }
}

fn pretty<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("value serializes");
    s.push('\n');
    s
}

pub fn ipf_report_json(r: &IpfReport) -> String {
    pretty(&IpfReportJson::from(r))
}

pub fn verdict_json(v: &MaskVerdict) -> String {
    pretty(v)
}

pub fn verdicts_json(v: &[MaskVerdict]) -> String {
    pretty(&v)
}

pub const GRID_HEADER: [&str; 7] = ["n", "m", "N", "status", "witnessL", "witnessStart", "conditionFailed"];

pub fn grid_csv(grid: &VerdictGrid) -> Result<String> {
    csv_string(|w| {
        w.write_record(GRID_HEADER)?;
        for ((n, m), cell) in &grid.cells {
            let witness = cell.verdict.witness.as_ref();
            w.write_record([
                n.to_string(),
                m.to_string(),
                cell.point_count.to_string(),
                cell.verdict.status.to_string(),
                witness.map(|x| x.len.to_string()).unwrap_or_default(),
                witness.map(|x| x.start.to_string()).unwrap_or_default(),
                witness.map(|x| x.condition.name().to_string()).unwrap_or_default(),
            ])?;
        }
        Ok(())
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use trine_core::ac23::{verdict_grid, SearchConfig};
    use trine_core::dynamics::run_to_mirror;
    use trine_core::ipf::{check_ipf, IpfOptions};
    use trine_core::MixedGraph;

    #[test]
    fn fixture_report_keys() {
        let g = MixedGraph::ring(3).unwrap();
        let a = run_to_mirror(&g, &"ABA".parse().unwrap(), 100).unwrap();
        let b = run_to_mirror(&g, &"BAB".parse().unwrap(), 100).unwrap();
        let r = check_ipf(&a, &b, &IpfOptions::default()).unwrap();
        let v: serde_json::Value = serde_json::from_str(&ipf_report_json(&r)).unwrap();
        for key in ["T", "Tbar", "lambda", "lambdaBar", "K", "div3", "c1", "c8", "light", "full", "witnesses"] {
            assert!(v.get(key).is_some(), "missing {key}");
        }
        assert_eq!(v["K"], 2);
        assert_eq!(v["c1Raw"], false);
        assert_eq!(v["full"], true);
    }

    #[test]
    fn small_grid_csv() {
        let config = SearchConfig { lmax: 9, ..SearchConfig::default() };
        let grid = verdict_grid(3, 5, &config).unwrap();
        let csv = grid_csv(&grid).unwrap();
        let lines: Vec<_> = csv.lines().collect();
        assert_eq!(lines[0], "n,m,N,status,witnessL,witnessStart,conditionFailed");
        assert_eq!(lines.len(), 1 + 6);
        assert!(lines.contains(&"1,5,4,Incorrect,7,BABAAAA,div3"));
        assert!(lines.contains(&"3,5,5,CorrectSoFar,,,"));
    }
}
