//! Step-table files for the `(1, 2^k − 1)` induction.
//!
//! ```text
//! # comment
//! id product-v1
//! base 1,1,1
//! next 1 1,2,-1
//! ```
//!
//! `base` lines give the three-column starting rows in construction order;
//! `next v a,b,c` gives the new-column values of the three copies of a row
//! whose last value is `v`.

use std::fmt::Write;

use trine_core::rt::{RtRow, RtValue, StepTable};

use crate::error::{parse_err, Result};

fn values(line: usize, s: &str) -> Result<Vec<RtValue>> {
    s.split(',')
        .map(|t| t.trim().parse().map_err(|_| parse_err(line, format!("bad value {t:?}"))))
        .collect()
}

pub fn parse_step_table(text: &str) -> Result<StepTable> {
    let mut id = None;
    let mut base = Vec::new();
    let mut map = [None; 6];
    for (i, raw) in text.lines().enumerate() {
        let n = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
        let rest = rest.trim();
        match key {
            "id" if !rest.is_empty() => id = Some(rest.to_string()),
            "base" => {
                let row = values(n, rest)?;
                if row.len() != 3 {
                    return Err(parse_err(n, "base rows have three values"));
                }
                base.push(RtRow::new(row));
            }
            "next" => {
                let (from, to) = rest
                    .split_once(char::is_whitespace)
                    .ok_or_else(|| parse_err(n, "expected `next <value> <a,b,c>`"))?;
                let from: RtValue = from.parse().map_err(|_| parse_err(n, format!("bad value {from:?}")))?;
                let to: [RtValue; 3] = values(n, to.trim())?
                    .try_into()
                    .map_err(|_| parse_err(n, "a step gives three values"))?;
                if map[from.code() as usize].replace(to).is_some() {
                    return Err(parse_err(n, format!("second step for {from}")));
                }
            }
            _ => return Err(parse_err(n, format!("unknown line {line:?}"))),
        }
    }
    Ok(StepTable {
        id: id.ok_or_else(|| parse_err(1, "missing `id` line"))?,
        base,
        map,
    })
}

pub fn write_step_table(step: &StepTable) -> String {
    let mut out = format!("id {}\n", step.id);
    for row in &step.base {
        writeln!(out, "base {row}").unwrap();
    }
    for v in RtValue::ALL {
        if let Some([a, b, c]) = step.map[v.code() as usize] {
            writeln!(out, "next {v} {a},{b},{c}").unwrap();
        }
    }
    out
}
