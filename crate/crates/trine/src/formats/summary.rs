use trine_core::rt::{Coincidence, CoincidenceMatrix, IntegralTable, ResolutionTable, RtValue, TableClass, TableKind};

use super::csv_string;
use crate::error::Result;

/// `[1,3]` becomes `[1.3]` so labels never need quoting.
pub fn csv_label(label: &str) -> String {
    label.replace(',', ".")
}

fn class_name(c: TableClass) -> &'static str {
    match c {
        TableClass::Small => "small",
        TableClass::Middle => "middle",
        TableClass::Full => "full",
    }
}

fn kind_name(k: TableKind) -> &'static str {
    match k {
        TableKind::NotCompletelyCorrect => "not-completely-correct",
        TableKind::CompletelyCorrect1st => "completely-correct-1st",
        TableKind::CompletelyCorrect2nd => "completely-correct-2nd",
    }
}

/// One line per table: size, class, kind and value counts in the zero
/// column and elsewhere.
pub fn scounts_csv(tables: &[(String, ResolutionTable)]) -> Result<String> {
    csv_string(|w| {
        let mut header = vec!["table".to_string(), "N".into(), "CR".into(), "class".into(), "kind".into()];
        for part in ["zero", "other"] {
            header.extend(RtValue::ALL.iter().map(|v| format!("{part}_{v}")));
        }
        w.write_record(&header)?;
        for (label, t) in tables {
            let s = t.s_counts();
            let mut rec = vec![
                csv_label(label),
                t.width().to_string(),
                t.row_count().to_string(),
                class_name(t.classify()).to_string(),
                kind_name(t.kind()).to_string(),
            ];
            rec.extend(s.zero.iter().chain(&s.others).map(|c| c.to_string()));
            w.write_record(&rec)?;
        }
        Ok(())
    })
}

fn cell_text(c: Coincidence) -> String {
    match c {
        Coincidence::Equal => "equal".into(),
        Coincidence::Includes => "includes".into(),
        Coincidence::IncludedIn => "included".into(),
        Coincidence::Intersection { rows, group } => format!("{rows} g{group}"),
    }
}

/// Square matrix: cell `(i, j)` says how table `i` relates to table `j`;
/// intersections show their row count and group.
pub fn coincidence_csv(m: &CoincidenceMatrix) -> Result<String> {
    csv_string(|w| {
        let mut header = vec!["table".to_string()];
        header.extend(m.labels.iter().map(|l| csv_label(l)));
        w.write_record(&header)?;
        for (label, row) in m.labels.iter().zip(&m.cells) {
            let mut rec = vec![csv_label(label)];
            rec.extend(row.iter().map(|&c| cell_text(c)));
            w.write_record(&rec)?;
        }
        Ok(())
    })
}

/// The union fold of an integral table, largest table first.
pub fn integral_csv(t: &IntegralTable) -> Result<String> {
    csv_string(|w| {
        w.write_record(["table", "CR", "integralCR"])?;
        for s in &t.steps {
            w.write_record([csv_label(&s.label), s.c_r.to_string(), s.integral_c_r.to_string()])?;
        }
        Ok(())
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use trine_core::rt::{build_1_2k1, coincidence_matrix, StepTable};

    #[test]
    fn scounts_of_induction_tables() {
        let step = StepTable::product();
        let tables: Vec<_> = (1..=2)
            .map(|k| {
                let t = build_1_2k1(k, Some(&step)).unwrap();
                (format!("[1,{}]", (1 << k) - 1), t)
            })
            .collect();
        let csv = scounts_csv(&tables).unwrap();
        let lines: Vec<_> = csv.lines().collect();
        assert_eq!(
            lines[0],
            "table,N,CR,class,kind,zero_0,zero_1,zero_2,zero_-0,zero_-1,zero_-2,other_0,other_1,other_2,other_-0,other_-1,other_-2"
        );
        assert!(lines[1].starts_with("[1.1],3,9,small,completely-correct-1st,0,4,0,0,5,0,0,6,6,0,6,0"));
        assert!(lines[2].starts_with("[1.3],4,27,small,completely-correct-1st,0,8,0,0,19,0"));
    }

    #[test]
    fn coincidence_of_a_table_with_itself() {
        let t = build_1_2k1(2, Some(&StepTable::product())).unwrap();
        let m = coincidence_matrix(&[t.clone(), t]).unwrap();
        assert_eq!(coincidence_csv(&m).unwrap(), "table,[1.3],[1.3]\n[1.3],equal,equal\n[1.3],equal,equal\n");
    }
}
