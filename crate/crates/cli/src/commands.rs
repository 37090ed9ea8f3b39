use std::collections::{BTreeMap, BTreeSet};
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use zipcal_core::bench::{doubling_ratios, run_bench, write_bench_table, BenchPlan};
use zipcal_core::corpus::{load_dataset, Dataset};
use zipcal_core::manifest::{MultiManifest, SelectionManifest};
use zipcal_core::select::{
    select_multidomain, select_random, select_zipcal_with, Method, MultiConfig,
};
use zipcal_core::stats::{
    compare_methods, coverage_report_from_trace, frequency_table, write_coverage,
    write_rank_frequency, zipf_fit, ExportHeader, EXPORT_FORMAT_VERSION,
};
use zipcal_core::synth::ZipfCorpus;
use zipcal_core::{Error, Result};

use crate::config::RunConfig;

fn create(path: &Path) -> Result<BufWriter<File>> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| Error::io(path, e))
}

fn finish(path: &Path, w: impl FnOnce(&mut BufWriter<File>) -> std::io::Result<()>) -> Result<()> {
    let mut out = create(path)?;
    w(&mut out).and_then(|_| out.flush()).map_err(|e| Error::io(path, e))
}

/// Dataset names become file-name stems.
fn stem(name: &str) -> String {
    name.chars()
        .map(|c| if c.is_alphanumeric() || "-_.".contains(c) { c } else { '_' })
        .collect()
}

fn single_dataset(config: &RunConfig) -> Result<&Path> {
    match config.datasets.as_slice() {
        [one] => Ok(one),
        [] => Err(Error::usage("dataset: a dataset path is required")),
        _ => Err(Error::usage("dataset: this command takes exactly one dataset")),
    }
}

fn load(path: &Path, config: &RunConfig) -> Result<Dataset> {
    load_dataset(path, &config.format, &config.tokenizer)
}

pub fn run_sample(config: &RunConfig) -> Result<PathBuf> {
    let ds = load(single_dataset(config)?, config)?;
    let result = match config.method {
        Method::Zipcal => select_zipcal_with(&ds, config.k, &config.zipcal)?,
        Method::Random => select_random(&ds, config.k, config.seed)?,
    };
    let mut manifest =
        SelectionManifest::new(&ds, &result, Some(config.zipcal.engine), config.zipcal.pool);
    let mut name = format!("{}.{}.k{}", stem(&ds.name), config.method.as_str(), config.k);
    if let Some(seed) = result.seed {
        name.push_str(&format!(".seed{seed}"));
    }
    if config.emit_texts {
        manifest = manifest.with_texts(&ds);
        let texts_path = config.out.join(format!("{name}.texts.jsonl"));
        finish(&texts_path, |w| {
            for &i in &manifest.indices {
                let record = serde_json::json!({ "id": i, "text": ds.samples[i].text });
                writeln!(w, "{record}")?;
            }
            Ok(())
        })?;
    }
    let path = config.out.join(format!("{name}.manifest.json"));
    manifest.write(&path)?;
    println!(
        "{}: n={} vocab={} method={} selected={} coverage={:.4} evaluations={} time={:.3}s -> {}",
        ds.name,
        ds.len(),
        ds.full_vocab.len(),
        config.method.as_str(),
        result.indices.len(),
        result.coverage.last().copied().unwrap_or(0.0),
        result.evaluations,
        result.wall_time.as_secs_f64(),
        path.display()
    );
    Ok(path)
}

pub fn run_sample_multi(config: &RunConfig) -> Result<PathBuf> {
    if config.datasets.is_empty() {
        return Err(Error::usage("dataset: at least one dataset path is required"));
    }
    let datasets = config
        .datasets
        .iter()
        .map(|p| load(p, config))
        .collect::<Result<Vec<_>>>()?;
    let mut names = BTreeSet::new();
    for ds in &datasets {
        if !names.insert(ds.name.as_str()) {
            return Err(Error::usage(format!(
                "dataset: two inputs share the name {:?}; rename one file",
                ds.name
            )));
        }
    }
    let multi = MultiConfig {
        k: config.k,
        seed: config.seed,
        dims: config.dim,
        pool_size: config.pool_size,
        zipcal: config.zipcal,
    };
    let result = select_multidomain(&datasets, &multi)?;
    let mut manifest = MultiManifest::new(&datasets, &multi, &result);
    if config.emit_texts {
        manifest = manifest.with_texts(&datasets);
    }
    let path = config
        .out
        .join(format!("multi.k{}.seed{}.manifest.json", config.k, config.seed));
    manifest.write(&path)?;
    let mut per_domain: BTreeMap<&str, usize> = BTreeMap::new();
    for s in &result.final_indices {
        *per_domain.entry(s.domain.as_str()).or_default() += 1;
    }
    println!(
        "selected {} from pool of {} across {} domains {:?} -> {}",
        result.final_indices.len(),
        result.pool_results.iter().map(|p| p.result.indices.len()).sum::<usize>(),
        datasets.len(),
        per_domain,
        path.display()
    );
    Ok(path)
}

pub fn run_stats(
    config: &RunConfig,
    manifest: Option<&Path>,
    fit_ranks: usize,
) -> Result<Vec<PathBuf>> {
    let ds = load(single_dataset(config)?, config)?;
    let mut written = Vec::new();

    let full = frequency_table(&ds.samples);
    let header = ExportHeader {
        dataset: ds.name.clone(),
        method: "full".into(),
        k: ds.len(),
        tokenizer_hash: ds.tokenizer_hash.clone(),
    };
    let path = config.out.join(format!("{}.full.rank_frequency.csv", stem(&ds.name)));
    finish(&path, |w| write_rank_frequency(w, &header, &full))?;
    println!(
        "{}: n={} types={} tokens={} {}",
        ds.name,
        ds.len(),
        full.types(),
        full.total,
        describe_fit(&full, fit_ranks)
    );
    written.push(path);

    if let Some(mpath) = manifest {
        let m = SelectionManifest::read(mpath)?;
        m.verify_dataset(&ds)?;
        let report = coverage_report_from_trace(
            &ds,
            m.method.as_str(),
            m.k,
            &m.indices,
            &m.gains,
            &m.coverage,
        )?;
        let header = ExportHeader {
            dataset: ds.name.clone(),
            method: m.method.as_str().into(),
            k: m.k,
            tokenizer_hash: ds.tokenizer_hash.clone(),
        };
        let name = manifest_stem(mpath);
        let table = frequency_table(m.indices.iter().map(|&i| &ds.samples[i]));
        let rf = config.out.join(format!("{name}.rank_frequency.csv"));
        finish(&rf, |w| write_rank_frequency(w, &header, &table))?;
        let cov = config.out.join(format!("{name}.coverage.csv"));
        finish(&cov, |w| write_coverage(w, &header, &report.curve))?;
        println!(
            "{} k={}: types={} coverage={:.4} {}",
            m.method.as_str(),
            m.k,
            table.types(),
            report.fraction,
            describe_fit(&table, fit_ranks)
        );
        written.push(rf);
        written.push(cov);
    }
    Ok(written)
}

fn describe_fit(table: &zipcal_core::stats::FrequencyTable, fit_ranks: usize) -> String {
    match zipf_fit(table, fit_ranks) {
        Ok(fit) => format!(
            "zipf_exponent={:.4} ranks={}..{} r2={:.4}",
            fit.exponent, fit.fit_range.0, fit.fit_range.1, fit.r_squared
        ),
        Err(e) => format!("(no fit: {e})"),
    }
}

fn manifest_stem(path: &Path) -> String {
    let name = path
        .file_name()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    name.strip_suffix(".manifest.json")
        .or_else(|| name.strip_suffix(".json"))
        .unwrap_or(&name)
        .to_owned()
}

pub fn run_compare(config: &RunConfig, manifests: &[PathBuf]) -> Result<Vec<PathBuf>> {
    if manifests.len() < 2 {
        return Err(Error::usage("manifest: compare needs at least two manifests"));
    }
    let ds = load(single_dataset(config)?, config)?;
    let mut by_budget: BTreeMap<usize, Vec<(zipcal_core::stats::CoverageReport, String)>> =
        BTreeMap::new();
    let mut written = Vec::new();
    for mpath in manifests {
        let m = SelectionManifest::read(mpath)?;
        m.verify_dataset(&ds)?;
        let report = coverage_report_from_trace(
            &ds,
            m.method.as_str(),
            m.k,
            &m.indices,
            &m.gains,
            &m.coverage,
        )?;
        let header = ExportHeader {
            dataset: ds.name.clone(),
            method: report.method.clone(),
            k: report.k,
            tokenizer_hash: ds.tokenizer_hash.clone(),
        };
        let cov = config.out.join(format!("{}.coverage.csv", manifest_stem(mpath)));
        finish(&cov, |w| write_coverage(w, &header, &report.curve))?;
        let cov_name = cov
            .file_name()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default();
        by_budget.entry(m.k).or_default().push((report, cov_name));
        written.push(cov);
    }

    for (k, entries) in &by_budget {
        let reports: Vec<_> = entries.iter().map(|(r, _)| r.clone()).collect();
        let rows = compare_methods(&reports)?;
        let path = config.out.join(format!("{}.compare.k{k}.csv", stem(&ds.name)));
        finish(&path, |w| {
            writeln!(
                w,
                "# format_version={} dataset={} k={} tokenizer={} vocab={}",
                EXPORT_FORMAT_VERSION,
                stem(&ds.name),
                k,
                ds.tokenizer_hash,
                ds.full_vocab.len()
            )?;
            writeln!(w, "method,k,runs,mean,min,max,curve")?;
            for row in &rows {
                writeln!(
                    w,
                    "{},{},{},{},{},{},{}",
                    row.method, row.k, row.runs, row.mean, row.min, row.max, entries[row.curve_ref].1
                )?;
            }
            Ok(())
        })?;
        println!("k={k}");
        for row in &rows {
            println!(
                "  {:<10} runs={:<3} mean={:.4} min={:.4} max={:.4}",
                row.method, row.runs, row.mean, row.min, row.max
            );
        }
        written.push(path);
    }
    Ok(written)
}

/// Synthetic corpus parameters for `bench` when no dataset is given.
#[derive(Debug, Clone, Copy)]
pub struct SynthParams {
    pub exponent: f64,
    pub types: usize,
    pub tokens_per_sample: usize,
}

pub fn run_bench_cmd(
    config: &RunConfig,
    sizes: &[usize],
    budgets: &[usize],
    synth: SynthParams,
    repeats: usize,
) -> Result<PathBuf> {
    if sizes.is_empty() || budgets.is_empty() {
        return Err(Error::usage("sizes/budgets: at least one value each is required"));
    }
    if budgets.contains(&0) {
        return Err(Error::usage("budgets: every k must be at least 1"));
    }
    let largest = *sizes.iter().max().expect("non-empty");
    let corpus = match config.datasets.as_slice() {
        [] => ZipfCorpus::new(synth.exponent, synth.types, synth.tokens_per_sample, config.seed)
            .generate(largest)?,
        [one] => load(one, config)?,
        _ => return Err(Error::usage("dataset: bench takes at most one dataset")),
    };
    let plan = BenchPlan {
        sizes: sizes.to_vec(),
        budgets: budgets.to_vec(),
        method: config.method,
        options: config.zipcal,
        seed: config.seed,
        repeats,
    };
    let records = run_bench(&corpus, &plan)?;
    let path = config.out.join("bench.csv");
    finish(&path, |w| write_bench_table(w, &records))?;

    write_bench_table(std::io::stdout().lock(), &records).map_err(|e| Error::io("<stdout>", e))?;
    for &k in budgets {
        for (n, ratio) in doubling_ratios(&records, k) {
            println!("k={k}: wall_time({})/wall_time({n}) = {ratio:.3}", 2 * n);
        }
    }
    Ok(path)
}
