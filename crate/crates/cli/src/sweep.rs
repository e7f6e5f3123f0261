//! Batch runs over a grid of models and parameters.

use std::path::Path;

use chowlab::lefschetz::kunnemann_range;
use chowlab::{Model, ModelKind};
use clap::ValueEnum;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::commands::{self, CheckName, CheckParams};
use crate::error::{CliError, CliResult};
use crate::report::{source_date_epoch, Outcome};
use crate::spec::{self, SCHEMA_VERSION};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TaskKind {
    Conj1,
    Conj2,
    Hl,
    Kunnemann,
    Descent,
    C0,
    TwoImplyOne,
    Pbig,
    Stability,
}

impl TaskKind {
    fn check(self) -> Option<CheckName> {
        Some(match self {
            TaskKind::Conj1 => CheckName::Conj1,
            TaskKind::Conj2 => CheckName::Conj2,
            TaskKind::Hl => CheckName::Hl,
            TaskKind::Kunnemann => CheckName::Kunnemann,
            TaskKind::Descent => CheckName::Descent,
            TaskKind::C0 => CheckName::C0,
            TaskKind::TwoImplyOne => CheckName::TwoImplyOne,
            TaskKind::Pbig | TaskKind::Stability => return None,
        })
    }
}

/// One grid. Omitted parameter lists mean "every admissible value".
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TaskSpec {
    pub check: TaskKind,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub models: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<Vec<u32>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s: Option<Vec<i64>>,
    /// Divisor expressions; the model's ample class when omitted.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub divisors: Option<Vec<String>>,
    /// Genera for `pbig` and `stability`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g: Option<Vec<u32>>,
    /// Symmetric-product dimensions for `stability`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<Vec<u32>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub schema_version: u32,
    pub tasks: Vec<TaskSpec>,
}

impl SweepConfig {
    pub fn parse(text: &str, origin: &str) -> CliResult<Self> {
        let config: SweepConfig = serde_json::from_str(text).map_err(|source| CliError::Json {
            origin: origin.to_string(),
            source,
        })?;
        if config.schema_version != SCHEMA_VERSION {
            return Err(CliError::Usage(format!(
                "{origin}: unsupported schema_version {} (expected {SCHEMA_VERSION})",
                config.schema_version
            )));
        }
        Ok(config)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Preset {
    /// Kunnemann isomorphisms on divisor models, g <= 4.
    Kunnemann,
    /// pbig determinants, g <= 12.
    Pbig,
    /// Hard Lefschetz on exterior cohomology, g <= 4.
    Hl,
    /// conj1 on theta-mode symmetric products, g <= 6.
    Conj1Sympow,
    /// conj2 + Hard Lefschetz => conj1 on small models, g <= 3.
    TwoImplyOne,
    /// Strong stability on theta-mode symmetric products, g <= 4.
    Stability,
}

impl Preset {
    pub fn config(self, max_g: Option<u32>) -> SweepConfig {
        let task = |check: TaskKind, models: Vec<String>| TaskSpec {
            check,
            models,
            p: None,
            s: None,
            divisors: None,
            g: None,
            n: None,
        };
        let upto = |default: u32, from: u32| from..=max_g.unwrap_or(default);
        let tasks = match self {
            Preset::Kunnemann => vec![task(TaskKind::Kunnemann, upto(4, 1).map(|g| format!("divisor:g={g}")).collect())],
            Preset::Hl => vec![task(TaskKind::Hl, upto(4, 1).map(|g| format!("cohomology:g={g}")).collect())],
            Preset::Conj1Sympow => vec![task(TaskKind::Conj1, upto(6, 1).map(|g| format!("sympow:g={g}")).collect())],
            Preset::Pbig => vec![TaskSpec {
                g: Some(upto(12, 2).collect()),
                ..task(TaskKind::Pbig, Vec::new())
            }],
            Preset::Stability => vec![TaskSpec {
                g: Some(upto(4, 1).collect()),
                ..task(TaskKind::Stability, Vec::new())
            }],
            Preset::TwoImplyOne => {
                let mut models = Vec::new();
                for g in upto(3, 1) {
                    models.push(format!("theta:g={g}"));
                    models.push(format!("divisor:g={g}"));
                    models.push(format!("sympow:g={g}"));
                }
                models.extend(["curve:q=1".to_string(), "curve:q=2".to_string()]);
                vec![task(TaskKind::TwoImplyOne, models)]
            }
        };
        SweepConfig {
            schema_version: SCHEMA_VERSION,
            tasks,
        }
    }
}

/// One row of the summary table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Row {
    pub model: String,
    pub check: String,
    pub p: Option<u32>,
    pub s: Option<i64>,
    pub divisor: String,
    pub verdict: String,
    pub passed: bool,
    pub domain_dim: Option<usize>,
    pub codomain_dim: Option<usize>,
    pub rank: Option<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepSummary {
    pub schema_version: u32,
    pub tool_version: &'static str,
    pub timestamp: Option<u64>,
    pub total: usize,
    pub failed: usize,
    pub rows: Vec<Row>,
}

enum Job {
    Check {
        check: CheckName,
        model: usize,
        params: CheckParams,
    },
    Pbig {
        g: u32,
        p: u32,
    },
    Stability {
        g: u32,
        n: u32,
        p: u32,
    },
}

fn filtered<T: Copy + PartialEq>(all: impl IntoIterator<Item = T>, given: &Option<Vec<T>>) -> Vec<T> {
    match given {
        Some(list) => list.clone(),
        None => all.into_iter().collect(),
    }
}

/// Default `p` values for a model-based check.
fn default_ps(check: CheckName, model: &Model) -> Vec<u32> {
    let n = model.dim();
    match check {
        CheckName::Hl if model.kind() == ModelKind::Cohomology => (0..=n).collect(),
        CheckName::Conj2 => (0..=(n + 1) / 2).collect(),
        CheckName::C0 => (0..=n).collect(),
        _ => (0..=n / 2).collect(),
    }
}

fn expand(config: &SweepConfig) -> CliResult<(Vec<Model>, Vec<Job>)> {
    let mut models: Vec<Model> = Vec::new();
    let mut jobs = Vec::new();
    for task in &config.tasks {
        match task.check.check() {
            Some(check) => {
                if task.models.is_empty() {
                    return Err(CliError::Usage(format!("task `{:?}` lists no models", task.check)));
                }
                let divisors: Vec<Option<String>> = match &task.divisors {
                    Some(list) => list.iter().cloned().map(Some).collect(),
                    None => vec![None],
                };
                for spec in &task.models {
                    let model = spec::resolve(spec)?;
                    let idx = models.len();
                    let mut pairs: Vec<(u32, Option<i64>)> = Vec::new();
                    if check == CheckName::Kunnemann {
                        let g = model.g().ok_or_else(|| {
                            CliError::Usage(format!("kunnemann needs a divisor model, got `{spec}`"))
                        })?;
                        for (p, s) in kunnemann_range(g) {
                            let p_ok = task.p.as_ref().map_or(true, |l| l.contains(&p));
                            let s_ok = task.s.as_ref().map_or(true, |l| l.contains(&s));
                            if p_ok && s_ok {
                                pairs.push((p, Some(s)));
                            }
                        }
                    } else {
                        pairs = filtered(default_ps(check, &model), &task.p).into_iter().map(|p| (p, None)).collect();
                    }
                    models.push(model);
                    for (p, s) in pairs {
                        for divisor in &divisors {
                            jobs.push(Job::Check {
                                check,
                                model: idx,
                                params: CheckParams {
                                    p: Some(p),
                                    s,
                                    divisor: divisor.clone(),
                                },
                            });
                        }
                    }
                }
            }
            None => {
                let gs = task
                    .g
                    .clone()
                    .ok_or_else(|| CliError::Usage(format!("task `{:?}` needs a list `g`", task.check)))?;
                for g in gs {
                    if task.check == TaskKind::Pbig {
                        let all = (1..g).filter(|&p| 2 * p + 1 >= g && p + 2 <= g);
                        for p in filtered(all, &task.p) {
                            jobs.push(Job::Pbig { g, p });
                        }
                    } else {
                        let ns = filtered(1..2 * g, &task.n);
                        for n in ns {
                            let all = (0..=n).filter(|&p| 2 * p < n);
                            for p in filtered(all, &task.p) {
                                jobs.push(Job::Stability { g, n, p });
                            }
                        }
                    }
                }
            }
        }
    }
    Ok((models, jobs))
}

fn row(o: &Outcome, check: &str) -> Row {
    let get = |k: &str| o.parameters.get(k).cloned();
    Row {
        model: o.model.clone(),
        check: check.to_string(),
        p: get("p").and_then(|v| v.parse().ok()),
        s: get("s").and_then(|v| v.parse().ok()),
        divisor: get("divisor").unwrap_or_default(),
        verdict: o.verdict.clone(),
        passed: o.passed,
        domain_dim: o.dims.map(|d| d.0),
        codomain_dim: o.dims.map(|d| d.1),
        rank: o.dims.map(|d| d.2),
    }
}

/// Runs every job (in parallel) and returns the rows sorted by model, check, `p`, `s`,
/// divisor, comparing numbers inside names numerically. The first error in that order aborts the sweep.
pub fn run(config: &SweepConfig) -> CliResult<SweepSummary> {
    let (models, jobs) = expand(config)?;
    let results: Vec<CliResult<Row>> = jobs
        .par_iter()
        .map(|job| match job {
            Job::Check { check, model, params } => {
                commands::run_check(*check, &models[*model], params).map(|o| row(&o, check.as_str()))
            }
            Job::Pbig { g, p } => commands::pbig(*g, *p).map(|o| row(&o, "pbig")),
            Job::Stability { g, n, p } => commands::stability(*g, *n, *p).map(|o| {
                let mut r = row(&o, "stability");
                r.check = format!("stability n={n}");
                r
            }),
        })
        .collect();
    let mut rows = Vec::with_capacity(results.len());
    for r in results {
        rows.push(r?);
    }
    rows.sort_by(|a, b| sort_key(a).cmp(&sort_key(b)));
    let failed = rows.iter().filter(|r| !r.passed).count();
    Ok(SweepSummary {
        schema_version: SCHEMA_VERSION,
        tool_version: env!("CARGO_PKG_VERSION"),
        timestamp: source_date_epoch(),
        total: rows.len(),
        failed,
        rows,
    })
}

#[derive(Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Chunk<'a> {
    Num(u64),
    Text(&'a str),
}

/// Splits into digit and non-digit runs so that `g=2` sorts before `g=10`.
fn natural(s: &str) -> Vec<Chunk<'_>> {
    let mut out = Vec::new();
    let mut start = 0;
    let bytes = s.as_bytes();
    while start < s.len() {
        let digit = bytes[start].is_ascii_digit();
        let end = (start..s.len()).find(|&i| bytes[i].is_ascii_digit() != digit).unwrap_or(s.len());
        let run = &s[start..end];
        out.push(match run.parse() {
            Ok(n) if digit => Chunk::Num(n),
            _ => Chunk::Text(run),
        });
        start = end;
    }
    out
}

fn sort_key(r: &Row) -> (Vec<Chunk<'_>>, Vec<Chunk<'_>>, Option<u32>, Option<i64>, &str) {
    (natural(&r.model), natural(&r.check), r.p, r.s, &r.divisor)
}

pub fn load(path: &Path) -> CliResult<SweepConfig> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    SweepConfig::parse(&text, &path.display().to_string())
}

/// Plain-text table with one line per row and a closing count.
pub fn table(summary: &SweepSummary) -> String {
    let header = ["model", "check", "p", "s", "divisor", "verdict", "dims", "rank"].map(String::from);
    let opt = |v: Option<String>| v.unwrap_or_else(|| "-".into());
    let mut lines: Vec<[String; 8]> = vec![header];
    for r in &summary.rows {
        let dims = match (r.domain_dim, r.codomain_dim) {
            (Some(a), Some(b)) => format!("{a}->{b}"),
            _ => "-".into(),
        };
        lines.push([
            r.model.clone(),
            r.check.clone(),
            opt(r.p.map(|p| p.to_string())),
            opt(r.s.map(|s| s.to_string())),
            if r.divisor.is_empty() { "-".into() } else { r.divisor.clone() },
            r.verdict.clone(),
            dims,
            opt(r.rank.map(|x| x.to_string())),
        ]);
    }
    let widths: Vec<usize> = (0..8).map(|c| lines.iter().map(|l| l[c].len()).max().unwrap_or(0)).collect();
    let mut out = String::new();
    for l in &lines {
        let cells: Vec<String> = l.iter().zip(&widths).map(|(c, w)| format!("{c:<w$}")).collect();
        out.push_str(cells.join("  ").trim_end());
        out.push('\n');
    }
    out.push_str(&format!("{} checks, {} failed\n", summary.total, summary.failed));
    out
}
