use std::fs;
use std::path::{Path, PathBuf};
use std::thread;

use anyhow::{anyhow, bail, Context as _, Result};
use log::info;
use serde_json::{json, Value};

use floerlab::closed_open::{spectral_compare, SpectralComparison};
use floerlab::complex::Window;
use floerlab::geometry::{build_link_model, build_link_model_relaxed, build_morse_hamiltonian, Profile};
use floerlab::morse::{build_hf_complex, build_morse_complexes, MorseComplexes};
use floerlab::{Rational, RationalHamiltonian, RationalModel};

use crate::config::{eps_tag, Format, RunConfig};
use crate::output::{read_json, write_csv, write_json, write_svg_plot, Series};

pub const MANIFEST: &str = "manifest.json";

/// One `(model, eps)` pipeline.
pub struct Instance {
    pub eps: Rational,
    pub model: RationalModel,
    pub ham: RationalHamiltonian,
    pub complexes: MorseComplexes<Rational>,
}

impl Instance {
    pub fn pfh_file(&self) -> String {
        format!("pfh_eps{}.json", eps_tag(&self.eps))
    }

    pub fn hf_file(&self) -> String {
        format!("hf_eps{}.json", eps_tag(&self.eps))
    }
}

/// Builds every configured epsilon in parallel; the result keeps config order.
pub fn build_instances(cfg: &RunConfig) -> Result<Vec<Instance>> {
    let model = cfg.model()?;
    let window = Window::periods(cfg.window);
    thread::scope(|s| {
        let handles: Vec<_> = cfg
            .epsilons
            .iter()
            .map(|&eps| {
                let model = model.clone();
                s.spawn(move || -> Result<Instance> {
                    let ham = build_morse_hamiltonian(&model, eps, &Profile::Standard)?;
                    let complexes = build_morse_complexes(&model, &ham, window)?;
                    info!("built eps={eps}: {} PFH, {} HF generators", complexes.pfh.len(), complexes.hf.len());
                    Ok(Instance { eps, model, ham, complexes })
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().map_err(|_| anyhow!("worker thread panicked"))?)
            .collect()
    })
}

fn manifest_for(cfg: &RunConfig, instances: &[Instance]) -> Value {
    let files: Vec<Value> = instances
        .iter()
        .flat_map(|i| {
            [
                json!({"kind": "PFH", "eps": i.eps.to_string(), "path": i.pfh_file(), "generators": i.complexes.pfh.len()}),
                json!({"kind": "HF", "eps": i.eps.to_string(), "path": i.hf_file(), "generators": i.complexes.hf.len()}),
            ]
        })
        .collect();
    json!({
        "schema": cfg.schema,
        "model": {"genus": cfg.genus, "k": cfg.k, "d": instances.first().map(|i| i.model.d), "profile": cfg.profile},
        "epsilons": cfg.epsilons.iter().map(|e| e.to_string()).collect::<Vec<_>>(),
        "window": cfg.window,
        "seed": cfg.seed,
        "files": files,
    })
}

pub fn cmd_build(cfg: &RunConfig) -> Result<Vec<PathBuf>> {
    let instances = build_instances(cfg)?;
    fs::create_dir_all(&cfg.out).with_context(|| format!("creating {}", cfg.out.display()))?;
    let mut written = Vec::new();
    for i in &instances {
        for (name, c) in [(i.pfh_file(), &i.complexes.pfh), (i.hf_file(), &i.complexes.hf)] {
            let path = cfg.out.join(name);
            write_json(&path, &c.to_json())?;
            written.push(path);
        }
    }
    let manifest = cfg.out.join(MANIFEST);
    write_json(&manifest, &manifest_for(cfg, &instances))?;
    written.push(manifest);
    Ok(written)
}

/// Checks that `out` holds a build for this config and that the stored
/// complexes match a fresh build.
fn load_build(cfg: &RunConfig) -> Result<Vec<Instance>> {
    let manifest_path = cfg.out.join(MANIFEST);
    if !manifest_path.exists() {
        bail!(
            "no build found in {}: run `floerlab build` with the same --config/--out first",
            cfg.out.display()
        );
    }
    let instances = build_instances(cfg)?;
    let stored = read_json(&manifest_path)?;
    let expected = manifest_for(cfg, &instances);
    for key in ["model", "epsilons", "window"] {
        if stored.get(key) != expected.get(key) {
            bail!(
                "build in {} was made with a different {key} ({} vs {}): rerun `floerlab build`",
                cfg.out.display(),
                stored.get(key).unwrap_or(&Value::Null),
                expected[key]
            );
        }
    }
    for i in &instances {
        for (name, c) in [(i.pfh_file(), &i.complexes.pfh), (i.hf_file(), &i.complexes.hf)] {
            let path = cfg.out.join(&name);
            if !path.exists() {
                bail!("missing build artifact {}: rerun `floerlab build`", path.display());
            }
            if read_json(&path)? != c.to_json() {
                bail!("build artifact {} is stale or edited: rerun `floerlab build`", path.display());
            }
        }
    }
    Ok(instances)
}

pub const SPECTRAL_COLUMNS: [&str; 9] = ["g", "k", "d", "eps", "basepoint", "c_hf", "c_pfh", "integral", "holds"];
pub const RANK_COLUMNS: [&str; 6] = ["d", "g", "k", "periods", "rank_per_period", "expected"];

pub fn spectral_rows(
    cfg: &RunConfig,
    instances: &[Instance],
    all_basepoints: bool,
) -> Result<Vec<(Rational, SpectralComparison<Rational>)>> {
    let mut rows = Vec::new();
    for i in instances {
        let bps = if all_basepoints {
            floerlab::closed_open::Basepoint::all(i.model.d)
        } else {
            cfg.basepoints_or_default(i.model.d)
        };
        for x in bps {
            rows.push((i.eps, spectral_compare(&i.ham, &i.complexes, &x, &Rational::from(0))?));
        }
    }
    Ok(rows)
}

pub struct RankRow {
    pub d: usize,
    pub g: i64,
    pub k: i64,
    pub periods: usize,
    pub rank_per_period: usize,
}

/// HF rank per period on the genus-zero model with `d` circles.
pub fn rank_rows(cfg: &RunConfig) -> Result<Vec<RankRow>> {
    let eps = cfg.epsilons[0];
    cfg.rank_degrees
        .iter()
        .map(|&d| {
            let k = d as i64;
            let model: RationalModel = if k == 1 { build_link_model_relaxed(0, 1)? } else { build_link_model(0, k)? };
            let ham = build_morse_hamiltonian(&model, eps, &Profile::Standard)?;
            let hf = build_hf_complex(&model, &ham, Window::periods(cfg.window))?;
            Ok(RankRow { d, g: 0, k, periods: cfg.window, rank_per_period: hf.homology().rank_per_period })
        })
        .collect()
}

pub fn cmd_report(cfg: &RunConfig) -> Result<Vec<PathBuf>> {
    let instances = load_build(cfg)?;
    let rows = spectral_rows(cfg, &instances, false)?;
    let d = instances[0].model.d;
    let table: Vec<Vec<String>> = rows
        .iter()
        .map(|(eps, r)| {
            vec![
                cfg.genus.to_string(),
                cfg.k.to_string(),
                d.to_string(),
                eps.to_string(),
                r.basepoint.clone(),
                r.c_hf.to_string(),
                r.c_pfh.to_string(),
                r.integral.to_string(),
                r.holds.to_string(),
            ]
        })
        .collect();
    let ranks = rank_rows(cfg)?;
    let rank_table: Vec<Vec<String>> = ranks
        .iter()
        .map(|r| {
            vec![
                r.d.to_string(),
                r.g.to_string(),
                r.k.to_string(),
                r.periods.to_string(),
                r.rank_per_period.to_string(),
                (1usize << r.d).to_string(),
            ]
        })
        .collect();
    let out = &cfg.out;
    let mut written = Vec::new();
    if cfg.wants(Format::Csv) {
        written.push(emit_csv(out, "spectral_table.csv", &SPECTRAL_COLUMNS, &table)?);
        written.push(emit_csv(out, "rank_table.csv", &RANK_COLUMNS, &rank_table)?);
    }
    if cfg.wants(Format::Json) {
        written.push(emit_json_table(out, "spectral_table.json", &SPECTRAL_COLUMNS, &table)?);
        written.push(emit_json_table(out, "rank_table.json", &RANK_COLUMNS, &rank_table)?);
    }
    if cfg.plots {
        let path = out.join("spectral_vs_eps.svg");
        let labels: Vec<String> = cfg.basepoints_or_default(d).iter().map(|b| b.label()).collect();
        let mut series = Vec::new();
        for label in &labels {
            let pick = |f: &dyn Fn(&SpectralComparison<Rational>) -> Rational| -> Vec<(f64, f64)> {
                rows.iter()
                    .filter(|(_, r)| &r.basepoint == label)
                    .map(|(e, r)| (to_f64(e), to_f64(&f(r))))
                    .collect()
            };
            series.push(Series { name: format!("c_hf x={label}"), points: pick(&|r| r.lhs) });
            series.push(Series { name: format!("c_pfh+int x={label}"), points: pick(&|r| r.rhs) });
        }
        write_svg_plot(&path, "spectral invariants vs eps", "eps", "action", &series)?;
        written.push(path);
    }
    if let Some((_, bad)) = rows.iter().find(|(_, r)| !r.holds) {
        bail!("spectral inequality fails at basepoint {}: {} > {}", bad.basepoint, bad.lhs, bad.rhs);
    }
    Ok(written)
}

fn emit_csv(out: &Path, name: &str, header: &[&str], rows: &[Vec<String>]) -> Result<PathBuf> {
    let path = out.join(name);
    write_csv(&path, header, rows)?;
    Ok(path)
}

/// Rows as objects; the column order is kept in a separate `columns` list.
fn emit_json_table(out: &Path, name: &str, header: &[&str], rows: &[Vec<String>]) -> Result<PathBuf> {
    let path = out.join(name);
    let objects: Vec<Value> = rows
        .iter()
        .map(|r| Value::Object(header.iter().zip(r).map(|(h, v)| (h.to_string(), typed(h, v))).collect()))
        .collect();
    write_json(&path, &json!({"columns": header, "rows": objects}))?;
    Ok(path)
}

/// Counts and flags stay typed; rationals and labels stay exact strings.
fn typed(column: &str, v: &str) -> Value {
    match column {
        "eps" | "basepoint" | "c_hf" | "c_pfh" | "integral" => json!(v),
        _ => v.parse::<i64>().map(|n| json!(n)).or_else(|_| v.parse::<bool>().map(|b| json!(b))).unwrap_or(json!(v)),
    }
}

pub fn to_f64(r: &Rational) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}
