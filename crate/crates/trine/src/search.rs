//! Parallel mask classification and resumable grids.
//!
//! Work items of one mask run on the rayon pool. Once an item fails at a
//! non-degenerate length, later items are skipped; every earlier item still
//! runs, so the verdict equals the sequential one whatever the schedule.

use std::collections::BTreeSet;
use std::fs::OpenOptions;
use std::io::Write;
use std::path::Path;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use trine_core::ac23::{
    aggregate, evaluate_item, grid_masks, prepare, Ac23Error, GridCell, Mask, MaskVerdict, SearchConfig,
    VerdictGrid,
};

use crate::error::{io_at, parse_err, Error, Result};
use crate::formats::read_text;

pub fn pool(threads: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::Config(format!("thread pool: {e}")))
}

/// Same result as `trine_core::ac23::classify_mask`, on the current pool.
pub fn classify_mask_par(mask: &Mask, config: &SearchConfig) -> Result<MaskVerdict, Ac23Error> {
    let items = prepare(mask, config)?;
    let cutoff = AtomicUsize::new(usize::MAX);
    let results: Vec<_> = items
        .par_iter()
        .enumerate()
        .map(|(i, item)| {
            if i > cutoff.load(Ordering::Relaxed) {
                return None;
            }
            let out = evaluate_item(mask, item, config);
            if let Ok(o) = &out {
                if o.failure.is_some() && !mask.is_degenerate_at(item.len) {
                    cutoff.fetch_min(i, Ordering::Relaxed);
                }
            }
            Some((i, out))
        })
        .collect();
    let last = cutoff.into_inner();
    let mut outcomes = Vec::new();
    for (i, out) in results.into_iter().flatten() {
        if i > last {
            continue;
        }
        outcomes.push(out?);
    }
    Ok(aggregate(mask, config, outcomes))
}

fn cell(mask: &Mask, config: &SearchConfig) -> Result<GridCell, Ac23Error> {
    Ok(GridCell {
        verdict: classify_mask_par(mask, config)?,
        point_count: mask.point_count(),
        c_r: None,
    })
}

/// First line of a checkpoint: ties the file to one search configuration.
#[derive(Serialize, Deserialize)]
struct CheckpointHeader {
    checkpoint: u32,
    config: String,
}

fn load_checkpoint(path: &Path, config_hash: &str) -> Result<Vec<GridCell>> {
    if !path.exists() {
        return Ok(Vec::new());
    }
    let text = read_text(path)?;
    let mut lines = text.lines().enumerate();
    let Some((_, first)) = lines.next() else {
        return Ok(Vec::new());
    };
    let header: CheckpointHeader = serde_json::from_str(first).map_err(|e| parse_err(1, e.to_string()))?;
    if header.config != config_hash {
        return Err(Error::Config(format!(
            "checkpoint {} was written under another configuration",
            path.display()
        )));
    }
    let mut cells = Vec::new();
    for (i, line) in lines {
        // a torn final line is the cell being written when the run stopped
        match serde_json::from_str::<GridCell>(line) {
            Ok(c) => cells.push(c),
            Err(_) if i + 1 == text.lines().count() => {}
            Err(e) => return Err(parse_err(i + 1, e.to_string())),
        }
    }
    Ok(cells)
}

/// Grid over odd `n, m ≤ max`. With a checkpoint path, finished cells are
/// appended as they complete and reused by later calls with the same
/// `config_hash`.
pub fn grid(
    max: u64,
    config: &SearchConfig,
    checkpoint: Option<(&Path, &str)>,
) -> Result<VerdictGrid> {
    let mut grid = VerdictGrid::default();
    let masks = grid_masks(max, max);
    let wanted: BTreeSet<(u64, u64)> = masks.iter().map(|m| (m.n, m.m)).collect();
    let sink = match checkpoint {
        Some((path, hash)) => {
            let existing = load_checkpoint(path, hash)?;
            // rewrite so a torn line never precedes new cells
            let mut text = serde_json::to_string(&CheckpointHeader { checkpoint: 1, config: hash.to_string() })?;
            text.push('\n');
            for c in &existing {
                text.push_str(&serde_json::to_string(c)?);
                text.push('\n');
            }
            std::fs::write(path, text).map_err(io_at(path))?;
            for c in existing {
                if wanted.contains(&(c.verdict.mask.n, c.verdict.mask.m)) {
                    grid.insert(c);
                }
            }
            let file = OpenOptions::new().append(true).open(path).map_err(io_at(path))?;
            Some((path, Mutex::new(file)))
        }
        None => None,
    };
    let todo: Vec<Mask> = masks.into_iter().filter(|m| grid.get(m.n, m.m).is_none()).collect();
    let done: Vec<GridCell> = todo
        .par_iter()
        .map(|mask| {
            let c = cell(mask, config)?;
            if let Some((path, file)) = &sink {
                let line = serde_json::to_string(&c)?;
                let mut f = file.lock().expect("checkpoint lock");
                writeln!(f, "{line}").and_then(|_| f.flush()).map_err(io_at(*path))?;
            }
            Ok(c)
        })
        .collect::<Result<_>>()?;
    for c in done {
        grid.insert(c);
    }
    Ok(grid)
}
