//! Report bundles: every artifact of one configuration plus a manifest of
//! content hashes. Output depends only on the configuration and options.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use trine_core::ac23::Mask;
use trine_core::dynamics::run_to_mirror;
use trine_core::ipf::check_ipf;
use trine_core::rt::{coincidence_matrix, extract_rows, ExtractOptions, ExtractionHypothesis, ResolutionTable, StepTable};
use trine_core::{Coloring, RunRecord};

use crate::config::Config;
use crate::error::Result;
use crate::formats::report::{grid_csv, ipf_report_json, verdicts_json};
use crate::formats::rtfile::write_table;
use crate::formats::summary::{coincidence_csv, scounts_csv};
use crate::formats::trace::{run_json, trace_csv};
use crate::formats::write_text;
use crate::search::{classify_mask_par, grid};

/// Masks classified individually in every bundle.
pub const CHECK_MASKS: [(u64, u64); 6] = [(1, 1), (1, 3), (3, 3), (3, 5), (5, 5), (1, 5)];

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct BundleOptions {
    pub grid_max: u64,
    /// Largest ring length used for table extraction.
    pub rt_lmax: usize,
    /// Induction depth for the `(1, 2^k − 1)` tables.
    pub rt_kmax: u32,
    #[serde(skip)]
    pub step_table: Option<StepTable>,
}

impl Default for BundleOptions {
    fn default() -> Self {
        BundleOptions { grid_max: 7, rt_lmax: 8, rt_kmax: 3, step_table: None }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FileEntry {
    pub path: String,
    pub bytes: usize,
    pub sha256: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Manifest {
    pub format: String,
    pub config_hash: String,
    pub options: BundleOptions,
    pub step_table: Option<String>,
    pub files: Vec<FileEntry>,
}

fn trace_files(files: &mut BTreeMap<String, String>, config: &Config) -> Result<()> {
    let ring = Mask::new(1, 1).ring(3);
    let run = |s: &str| -> Result<RunRecord> {
        let c: Coloring = s.parse()?;
        Ok(run_to_mirror(&ring, &c, config.max_steps)?)
    };
    let (a, b) = (run("ABA")?, run("BAB")?);
    files.insert("traces/1.1-L3-ABA.csv".into(), trace_csv(&a)?);
    files.insert("traces/1.1-L3-ABA.json".into(), run_json(&a));
    files.insert("traces/1.1-L3-BAB.csv".into(), trace_csv(&b)?);
    files.insert("traces/1.1-L3-BAB.json".into(), run_json(&b));
    files.insert("traces/1.1-L3-ABA-ipf.json".into(), ipf_report_json(&check_ipf(&a, &b, &config.ipf())?));
    Ok(())
}

fn extracted(mask: Mask, config: &Config, lmax: usize) -> Result<ResolutionTable> {
    let opts = ExtractOptions {
        hypothesis: ExtractionHypothesis::PhaseDifference,
        level: config.level(),
        ipf: config.ipf(),
    };
    let mut pairs = Vec::new();
    for len in config.lmin..=lmax.min(config.lmax) {
        let ring = mask.ring(len);
        let full = ring.full_mask();
        for bits in 0..=full {
            let a = run_to_mirror(&ring, &Coloring::from_ab_bits(len, bits), config.max_steps)?;
            let b = run_to_mirror(&ring, &Coloring::from_ab_bits(len, !bits & full), config.max_steps)?;
            let passes = check_ipf(&a, &b, &opts.ipf).is_ok_and(|r| r.passes(opts.level) && r.slot_mismatches.is_empty());
            if passes {
                pairs.push((a, b));
            }
        }
    }
    Ok(extract_rows(&mask, &pairs, &opts)?)
}

fn label(t: &ResolutionTable) -> String {
    let m = t.mask.expect("bundle tables carry masks");
    let tag = t.hypothesis.as_deref().unwrap_or("exact");
    format!("[{},{}] {tag}", m.n, m.m)
}

fn table_files(files: &mut BTreeMap<String, String>, config: &Config, options: &BundleOptions) -> Result<()> {
    let mut tables = Vec::new();
    if let Some(step) = &options.step_table {
        for k in 1..=options.rt_kmax {
            let t = trine_core::rt::build_1_2k1(k, Some(step))?;
            let r = t.reflect()?;
            tables.push(t);
            if k > 1 {
                tables.push(r);
            }
        }
    }
    for (n, m) in [(1, 1), (1, 3), (3, 1)] {
        tables.push(extracted(Mask::new(n, m), config, options.rt_lmax)?);
    }
    let mut labelled = Vec::new();
    for t in &tables {
        let m = t.mask.expect("bundle tables carry masks");
        let hyp = t.hypothesis.as_deref().unwrap_or("exact");
        files.insert(format!("rt/{}.{}-{hyp}.rt", m.n, m.m), write_table(t));
        labelled.push((label(t), t.clone()));
    }
    files.insert("scounts.csv".into(), scounts_csv(&labelled)?);
    let four: Vec<_> = tables.iter().filter(|t| t.width() == 4).cloned().collect();
    let mut matrix = coincidence_matrix(&four)?;
    matrix.labels = four.iter().map(label).collect();
    files.insert("coincidence.csv".into(), coincidence_csv(&matrix)?);
    Ok(())
}

/// Computes every artifact in memory, keyed by relative path.
pub fn build_bundle(config: &Config, options: &BundleOptions) -> Result<(Manifest, BTreeMap<String, String>)> {
    config.validate()?;
    let search = config.search();
    let mut files = BTreeMap::new();
    let mut config_json = serde_json::to_string_pretty(&crate::config::Config { threads: 0, ..config.clone() })?;
    config_json.push('\n');
    files.insert("config.json".into(), config_json);
    trace_files(&mut files, config)?;
    let verdicts = CHECK_MASKS
        .iter()
        .map(|&(n, m)| classify_mask_par(&Mask::new(n, m), &search))
        .collect::<Result<Vec<_>, _>>()?;
    files.insert("verdicts.json".into(), verdicts_json(&verdicts));
    files.insert("grid.csv".into(), grid_csv(&grid(options.grid_max, &search, None)?)?);
    table_files(&mut files, config, options)?;
    let manifest = Manifest {
        format: "trine-bundle-1".into(),
        config_hash: config.hash(),
        options: options.clone(),
        step_table: options.step_table.as_ref().map(|s| s.id.clone()),
        files: files
            .iter()
            .map(|(path, body)| FileEntry {
                path: path.clone(),
                bytes: body.len(),
                sha256: hex::encode(Sha256::digest(body.as_bytes())),
            })
            .collect(),
    };
    Ok((manifest, files))
}

pub fn write_bundle(config: &Config, options: &BundleOptions, out: &Path) -> Result<Manifest> {
    let (manifest, files) = build_bundle(config, options)?;
    for (path, body) in &files {
        write_text(&out.join(path), body)?;
    }
    let mut m = serde_json::to_string_pretty(&manifest)?;
    m.push('\n');
    write_text(&out.join("manifest.json"), &m)?;
    Ok(manifest)
}
