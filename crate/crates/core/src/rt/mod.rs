//! Resolution tables: rows over the six values `0, 1, 2, -0, -1, -2`, their
//! subtable symmetry, canonical ordering, classification and set algebra.

mod algebra;
mod extract;
mod induction;
mod table;
mod value;

use core::fmt;

pub use algebra::{
    coincidence_matrix, compatibility, equals, find_conflict, includes, intersect, projected_rows,
    union, Coincidence, CoincidenceMatrix, Conflict, FoldStep, IntegralTable,
};
pub use extract::{extract_rows, ExtractOptions, ExtractionHypothesis};
pub use induction::{build_1_2k1, StepTable};
pub use table::{classify_value_set, ResolutionTable, RtRow, SCounts, TableClass, TableKind};
pub use value::{ParseRtValueError, RtValue};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RtError {
    DimensionMismatch { left: usize, right: usize },
    RowWidth { expected: usize, found: usize },
    IncompatibleTables(Conflict),
    NoTables,
    UnconfiguredStepTable,
    MissingStep(RtValue),
    BadStepTable(&'static str),
    UnverifiedRuns { index: usize },
    MissingMask,
}

impl fmt::Display for RtError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RtError::DimensionMismatch { left, right } => {
                write!(f, "tables have different widths ({left} vs {right})")
            }
            RtError::RowWidth { expected, found } => {
                write!(f, "row has {found} columns, table has {expected}")
            }
            RtError::IncompatibleTables(c) => {
                write!(f, "tables #{} and #{} are incompatible: row (", c.first, c.second)?;
                for (i, v) in c.row.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{v}")?;
                }
                write!(f, ") of the first appears in subtable ={} of the second", c.label)
            }
            RtError::NoTables => write!(f, "no tables given"),
            RtError::UnconfiguredStepTable => {
                write!(f, "induction needs a step table (none configured)")
            }
            RtError::MissingStep(v) => write!(f, "step table has no entry for last value {v}"),
            RtError::BadStepTable(why) => write!(f, "bad step table: {why}"),
            RtError::UnverifiedRuns { index } => {
                write!(f, "run pair #{index} does not pass the invariant check")
            }
            RtError::MissingMask => write!(f, "table carries no mask or its columns do not mirror"),
        }
    }
}

impl core::error::Error for RtError {}
