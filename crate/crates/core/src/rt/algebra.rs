use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;

use super::table::{ResolutionTable, RtRow};
use super::value::RtValue;
use super::RtError;

fn same_width(a: &ResolutionTable, b: &ResolutionTable) -> Result<(), RtError> {
    if a.width() != b.width() {
        return Err(RtError::DimensionMismatch { left: a.width(), right: b.width() });
    }
    Ok(())
}

fn merged_header(a: &ResolutionTable, b: &ResolutionTable) -> ResolutionTable {
    let mut t = a.clone_header();
    if a.mask != b.mask {
        t.mask = None;
    }
    if a.columns != b.columns {
        t.columns = None;
    }
    if t.hypothesis.is_none() {
        t.hypothesis = b.hypothesis.clone();
    }
    t
}

pub fn intersect(a: &ResolutionTable, b: &ResolutionTable) -> Result<ResolutionTable, RtError> {
    same_width(a, b)?;
    let rows = a.row_set().intersection(b.row_set()).cloned().collect();
    Ok(merged_header(a, b).with_rows(rows))
}

pub fn union(a: &ResolutionTable, b: &ResolutionTable) -> Result<ResolutionTable, RtError> {
    same_width(a, b)?;
    let rows = a.row_set().union(b.row_set()).cloned().collect();
    Ok(merged_header(a, b).with_rows(rows))
}

/// Every row of `b` is a row of `a`.
pub fn includes(a: &ResolutionTable, b: &ResolutionTable) -> Result<bool, RtError> {
    same_width(a, b)?;
    Ok(b.row_set().is_subset(a.row_set()))
}

pub fn equals(a: &ResolutionTable, b: &ResolutionTable) -> Result<bool, RtError> {
    same_width(a, b)?;
    Ok(a.row_set() == b.row_set())
}

/// Rows with the zero column deleted.
pub fn projected_rows(t: &ResolutionTable) -> BTreeSet<Vec<RtValue>> {
    t.rows().map(|r| r.without_center().to_vec()).collect()
}

/// A row of one table that, moved into another subtable, is a row of a
/// second table (zero column deleted).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Conflict {
    pub first: usize,
    pub second: usize,
    pub row: Vec<RtValue>,
    pub label: RtValue,
}

/// First conflict between `a` and `b`, or `None` when compatible.
pub fn find_conflict(a: &ResolutionTable, b: &ResolutionTable) -> Result<Option<(Vec<RtValue>, RtValue)>, RtError> {
    same_width(a, b)?;
    let other = projected_rows(b);
    for row in projected_rows(a) {
        for label in &RtValue::ALL[1..] {
            let moved: Vec<RtValue> = row.iter().map(|v| v.substitute(*label)).collect();
            if other.contains(&moved) {
                return Ok(Some((row, *label)));
            }
        }
    }
    Ok(None)
}

/// One fold of the integral table.
#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct FoldStep {
    pub label: String,
    pub c_r: usize,
    pub integral_c_r: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegralTable {
    pub table: ResolutionTable,
    pub steps: Vec<FoldStep>,
}

fn label_of(t: &ResolutionTable, i: usize) -> String {
    use alloc::format;
    match t.mask {
        Some(m) => format!("[{},{}]", m.n, m.m),
        None => format!("#{i}"),
    }
}

/// Checks every pair of distinct tables for conflicts, then unions the
/// tables starting from the largest `C_R`.
pub fn compatibility(tables: &[ResolutionTable]) -> Result<IntegralTable, RtError> {
    let first = tables.first().ok_or(RtError::NoTables)?;
    for t in tables {
        same_width(first, t)?;
    }
    for i in 0..tables.len() {
        for j in i + 1..tables.len() {
            if let Some((row, label)) = find_conflict(&tables[i], &tables[j])? {
                return Err(RtError::IncompatibleTables(Conflict { first: i, second: j, row, label }));
            }
        }
    }
    let mut order: Vec<usize> = (0..tables.len()).collect();
    // stable: ties keep input order
    order.sort_by(|&x, &y| tables[y].row_count().cmp(&tables[x].row_count()));
    let mut acc = tables[order[0]].clone_header();
    let mut steps = Vec::new();
    for &i in &order {
        acc = union(&acc, &tables[i])?;
        steps.push(FoldStep {
            label: label_of(&tables[i], i),
            c_r: tables[i].row_count(),
            integral_c_r: acc.row_count(),
        });
    }
    acc.mask = None;
    acc.columns = None;
    Ok(IntegralTable { table: acc, steps })
}

/// A cell of the coincidence matrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Coincidence {
    /// The row table includes the column table (`Includes` both ways means
    /// equal tables).
    Includes,
    /// The column table includes the row table.
    IncludedIn,
    Equal,
    /// Neither includes the other. `group` identifies the intersection
    /// table: cells with the same group have identical intersections.
    Intersection { rows: usize, group: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoincidenceMatrix {
    pub labels: Vec<String>,
    pub cells: Vec<Vec<Coincidence>>,
    /// Number of cells in each intersection group.
    pub group_sizes: Vec<usize>,
}

impl CoincidenceMatrix {
    pub fn cell(&self, i: usize, j: usize) -> Coincidence {
        self.cells[i][j]
    }
}

pub fn coincidence_matrix(tables: &[ResolutionTable]) -> Result<CoincidenceMatrix, RtError> {
    if let Some(first) = tables.first() {
        for t in tables {
            same_width(first, t)?;
        }
    }
    let n = tables.len();
    let mut groups: BTreeMap<BTreeSet<RtRow>, usize> = BTreeMap::new();
    let mut group_sizes = Vec::new();
    let mut cells = Vec::with_capacity(n);
    for i in 0..n {
        let mut line = Vec::with_capacity(n);
        for j in 0..n {
            let (a, b) = (&tables[i], &tables[j]);
            let ab = includes(a, b)?;
            let ba = includes(b, a)?;
            let cell = match (ab, ba) {
                (true, true) => Coincidence::Equal,
                (true, false) => Coincidence::Includes,
                (false, true) => Coincidence::IncludedIn,
                (false, false) => {
                    let common: BTreeSet<RtRow> =
                        a.row_set().intersection(b.row_set()).cloned().collect();
                    let rows = common.len();
                    let next = groups.len();
                    let group = *groups.entry(common).or_insert(next);
                    if group == group_sizes.len() {
                        group_sizes.push(0);
                    }
                    group_sizes[group] += 1;
                    Coincidence::Intersection { rows, group }
                }
            };
            line.push(cell);
        }
        cells.push(line);
    }
    Ok(CoincidenceMatrix {
        labels: tables.iter().enumerate().map(|(i, t)| label_of(t, i)).collect(),
        cells,
        group_sizes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn table(rows: &[&[u8]]) -> ResolutionTable {
        ResolutionTable::from_rows(
            rows[0].len(),
            rows.iter().map(|r| RtRow::from_codes(r).unwrap()),
        )
        .unwrap()
    }

    #[test]
    fn set_operations() {
        let a = table(&[&[1, 1, 1], &[1, 2, 4], &[4, 2, 2]]);
        let b = table(&[&[1, 1, 1], &[4, 4, 4]]);
        assert_eq!(intersect(&a, &b).unwrap().row_count(), 1);
        assert_eq!(union(&a, &b).unwrap().row_count(), 4);
        assert!(!includes(&a, &b).unwrap());
        assert!(includes(&union(&a, &b).unwrap(), &b).unwrap());
        assert!(equals(&intersect(&a, &a).unwrap(), &a).unwrap());
        let c = table(&[&[1, 1]]);
        assert_eq!(
            intersect(&a, &c),
            Err(RtError::DimensionMismatch { left: 3, right: 2 })
        );
    }

    #[test]
    fn conflicts_ignore_the_zero_column() {
        let a = table(&[&[1, 1, 1]]);
        // (2,2) is (1,1) moved into the =1 subtable
        let b = table(&[&[4, 2, 2]]);
        assert_eq!(find_conflict(&a, &b).unwrap(), Some((vec![RtValue::PLUS_ONE; 2], RtValue::ALL[1])));
        let c = table(&[&[4, 1, 1]]);
        assert_eq!(find_conflict(&a, &c).unwrap(), None);
        assert!(matches!(
            compatibility(&[a, b]),
            Err(RtError::IncompatibleTables(Conflict { first: 0, second: 1, .. }))
        ));
    }

    #[test]
    fn single_table_integral_is_itself() {
        let a = table(&[&[1, 1, 1], &[4, 2, 4]]);
        let it = compatibility(core::slice::from_ref(&a)).unwrap();
        assert!(equals(&it.table, &a).unwrap());
        assert_eq!(it.steps.len(), 1);
        assert_eq!(compatibility(&[]), Err(RtError::NoTables));
        // a table is never checked against itself
        let closed = table(&[&[1, 1, 1], &[4, 2, 2]]);
        assert_eq!(compatibility(core::slice::from_ref(&closed)).unwrap().table.row_count(), 2);
        assert!(compatibility(&[closed.clone(), closed]).is_err());
    }

    #[test]
    fn coincidence_groups_identical_intersections() {
        let a = table(&[&[1, 1, 1], &[1, 2, 2]]);
        let b = table(&[&[1, 1, 1], &[4, 4, 4]]);
        let c = table(&[&[1, 1, 1], &[4, 2, 2]]);
        let m = coincidence_matrix(&[a.clone(), b, c, a]).unwrap();
        assert_eq!(m.cell(0, 0), Coincidence::Equal);
        assert_eq!(m.cell(0, 3), Coincidence::Equal);
        let Coincidence::Intersection { rows, group } = m.cell(0, 1) else { panic!() };
        assert_eq!(rows, 1);
        assert_eq!(m.cell(1, 2), Coincidence::Intersection { rows: 1, group });
        assert_eq!(m.group_sizes[group], 10);
    }
}
