//! Resolution-table text files.
//!
//! ```text
//! N=4 mask=1,3 columns=0,-1,1,2 subtable==0 [EXPERIMENTAL] hypothesis=product-v1
//! 1,1,1,1
//! -1,1,1,2
//! ```
//!
//! `mask` and `columns` are optional; the marker and the hypothesis id
//! appear together or not at all. Rows follow in canonical order.

use std::fmt::Write;

use trine_core::ac23::Mask;
use trine_core::rt::{ResolutionTable, RtRow, RtValue};

use crate::error::{parse_err, Result};

const MARKER: &str = "[EXPERIMENTAL]";

fn join<T: ToString>(items: impl IntoIterator<Item = T>) -> String {
    items.into_iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

pub fn write_table(t: &ResolutionTable) -> String {
    let mut out = format!("N={}", t.width());
    if let Some(m) = t.mask {
        write!(out, " mask={},{}", m.n, m.m).unwrap();
    }
    if let Some(cols) = &t.columns {
        write!(out, " columns={}", join(cols)).unwrap();
    }
    out.push_str(" subtable==0");
    if let Some(h) = &t.hypothesis {
        write!(out, " {MARKER} hypothesis={h}").unwrap();
    }
    out.push('\n');
    for row in t.rows() {
        out.push_str(&join(row.values()));
        out.push('\n');
    }
    out
}

fn parse_ints<T: std::str::FromStr>(line: usize, s: &str) -> Result<Vec<T>> {
    s.split(',')
        .map(|x| x.trim().parse().map_err(|_| parse_err(line, format!("bad number {x:?}"))))
        .collect()
}

pub fn parse_table(text: &str) -> Result<ResolutionTable> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim()));
    let (_, header) = lines.next().ok_or_else(|| parse_err(1, "empty file"))?;
    let mut width = None;
    let mut mask = None;
    let mut columns = None;
    let mut hypothesis = None;
    let mut marker = false;
    let mut subtable = false;
    for token in header.split_whitespace() {
        if let Some(v) = token.strip_prefix("N=") {
            width = Some(v.parse::<usize>().map_err(|_| parse_err(1, format!("bad width {v:?}")))?);
        } else if let Some(v) = token.strip_prefix("mask=") {
            let nm: Vec<u64> = parse_ints(1, v)?;
            mask = match nm[..] {
                [n, m] => Some(Mask::try_new(n, m).ok_or_else(|| parse_err(1, "mask needs n, m ≥ 1"))?),
                _ => return Err(parse_err(1, "mask needs two numbers")),
            };
        } else if let Some(v) = token.strip_prefix("columns=") {
            columns = Some(parse_ints::<i64>(1, v)?);
        } else if let Some(v) = token.strip_prefix("hypothesis=") {
            hypothesis = Some(v.to_string());
        } else if token == "subtable==0" {
            subtable = true;
        } else if token == MARKER {
            marker = true;
        } else {
            return Err(parse_err(1, format!("unknown header field {token:?}")));
        }
    }
    let width = width.ok_or_else(|| parse_err(1, "header lacks N="))?;
    if !subtable {
        return Err(parse_err(1, "only =0 subtables are stored"));
    }
    if marker != hypothesis.is_some() {
        return Err(parse_err(1, "the EXPERIMENTAL marker and the hypothesis id go together"));
    }
    if columns.as_ref().is_some_and(|c| c.len() != width) {
        return Err(parse_err(1, "columns do not match N"));
    }
    let mut table = ResolutionTable::new(width);
    table.mask = mask;
    table.columns = columns;
    table.hypothesis = hypothesis;
    for (n, line) in lines {
        if line.is_empty() {
            continue;
        }
        let values = line
            .split(',')
            .map(|tok| tok.trim().parse::<RtValue>().map_err(|_| parse_err(n, format!("bad value {tok:?}"))))
            .collect::<Result<Vec<_>>>()?;
        if values.len() != width {
            return Err(parse_err(n, format!("row has {} values, N={width}", values.len())));
        }
        table.insert(RtRow::new(values))?;
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use trine_core::rt::{build_1_2k1, StepTable};

    #[test]
    fn plain_table_round_trip() {
        let text = "N=3 subtable==0\n1,0,0\n1,1,0\n-1,-2,0\n1,2,-0\n";
        let t = parse_table(text).unwrap();
        assert_eq!(t.row_count(), 4);
        assert!(!t.is_experimental());
        let written = write_table(&t);
        assert_eq!(parse_table(&written).unwrap(), t);
        assert_eq!(write_table(&parse_table(&written).unwrap()), written);
    }

    #[test]
    fn rows_come_out_in_canonical_order() {
        let t = parse_table("N=2 subtable==0\n-2,0\n0,1\n1,0\n").unwrap();
        assert_eq!(write_table(&t), "N=2 subtable==0\n1,0\n-2,0\n0,1\n");
    }

    #[test]
    fn induction_table_header() {
        let t = build_1_2k1(2, Some(&StepTable::product())).unwrap();
        let text = write_table(&t);
        assert!(text.starts_with("N=4 mask=1,3 columns=0,-1,1,2 subtable==0 [EXPERIMENTAL] hypothesis=product-v1\n"));
        assert_eq!(text.lines().count(), 28);
        assert_eq!(parse_table(&text).unwrap(), t);
    }

    #[test]
    fn malformed_files() {
        for bad in [
            "",
            "N=3\n1,1,1\n",
            "N=3 subtable==0 [EXPERIMENTAL]\n",
            "N=3 subtable==0\n1,1\n",
            "N=3 subtable==0\n1,1,7\n",
            "N=3 columns=0,1 subtable==0\n",
            "N=3 mask=1 subtable==0\n",
            "N=3 shape=1 subtable==0\n",
        ] {
            assert!(parse_table(bad).is_err(), "{bad:?}");
        }
    }
}
