//! Batch sweeps over graph universes with JSON reports.
//!
//! Every graph is an independent work item. Results are collected in universe order, so the
//! report bytes do not depend on the worker count. Timings are left out unless requested,
//! and the worker count is never echoed.

use std::collections::BTreeMap;
#[cfg(not(target_arch = "wasm32"))]
use std::time::Instant;

use serde::Serialize;

use crate::generate::{random_alpha2, GenError, Generator};
use crate::graph::Graph;
use crate::graph6::{self, Graph6Error};
use crate::immersion::{
    find_target_immersion, make_target, verify_certificate, Budget, SearchOutcome, TargetSpec,
};
use crate::invariants::{chromatic_number_alpha2, has_induced_c4, independence_number};
use crate::proof::{audit_proof_with, AuditError, AuditOptions};

pub const FORMAT_VERSION: u32 = 1;

/// Largest order a sweep may enumerate.
pub const MAX_SWEEP_ORDER: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum UniverseDescriptor {
    Enumerated {
        n_min: usize,
        n_max: usize,
        exact_alpha2: bool,
    },
    File {
        source: String,
    },
    Random {
        n: usize,
        count: usize,
        seed: u64,
    },
}

#[derive(Debug, Clone)]
pub struct Universe {
    pub descriptor: UniverseDescriptor,
    pub graphs: Vec<Graph>,
}

impl Universe {
    /// All isomorphism classes with `α ≤ 2` (or `α = 2` when `exact`) on `n_min..=n_max`
    /// vertices, ordered by order and then generation order.
    pub fn enumerated(n_min: usize, n_max: usize, exact_alpha2: bool) -> Result<Self, GenError> {
        let generator = Generator::with_max_order(MAX_SWEEP_ORDER);
        let mut graphs = Vec::new();
        for n in n_min..=n_max {
            graphs.extend(generator.alpha2(n, exact_alpha2)?);
        }
        Ok(Universe {
            descriptor: UniverseDescriptor::Enumerated {
                n_min,
                n_max,
                exact_alpha2,
            },
            graphs,
        })
    }

    /// Errors carry the 1-based line number.
    pub fn from_graph6(source: &str, text: &str) -> Result<Self, (usize, Graph6Error)> {
        Ok(Universe {
            descriptor: UniverseDescriptor::File {
                source: source.to_string(),
            },
            graphs: graph6::decode_lines(text)?,
        })
    }

    /// `count` seeded random graphs with `α ≤ 2`; the i-th uses seed `seed + i`.
    pub fn random(n: usize, count: usize, seed: u64) -> Self {
        Universe {
            descriptor: UniverseDescriptor::Random { n, count, seed },
            graphs: (0..count as u64)
                .map(|i| random_alpha2(n, seed.wrapping_add(i)))
                .collect(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Sweep {
    /// `K_{ell, ceil(n/2) - ell}` for every `ell` with `2 ell <= ceil(n/2)`, on `α = 2` graphs.
    Theorem4,
    /// `K_{ceil(n/2)}` on `α ≤ 2` graphs without an induced four-cycle.
    C4Free,
    /// `K^ell_{ell, χ - ell}` (clique-topped) on `α = 2` graphs with `2 ell <= χ`.
    Kll { ell: usize },
    /// The structural audit, for one `ell` or for every valid one.
    Audit { ell: Option<usize> },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[derive(Default)]
pub struct SweepConfig {
    pub budget: Budget,
    pub seed: u64,
    /// Worker threads; 0 picks the number of cores.
    pub jobs: usize,
    pub timings: bool,
}


#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConfigEcho {
    pub seed: u64,
    pub budget: Budget,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Status {
    Found {
        digest: String,
    },
    NotFound,
    Undecided,
    NotApplicable {
        reason: String,
    },
    /// The search returned a certificate the verifier refused.
    Rejected {
        reason: String,
    },
    Audited {
        first_violation: String,
    },
    /// Every audited step held: a counterexample.
    Anomaly,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    /// Target in CLI syntax, or `ell=<k>` for audits.
    pub check: String,
    #[serde(flatten)]
    pub status: Status,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Record {
    pub graph6: String,
    pub n: usize,
    pub checks: Vec<Check>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub micros: Option<u64>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub graphs: usize,
    pub checks: usize,
    pub found: usize,
    pub not_found: usize,
    pub undecided: usize,
    pub not_applicable: usize,
    pub rejected: usize,
    pub audited: usize,
    pub anomalies: usize,
    /// Audits tallied by the step that failed first.
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub first_violations: BTreeMap<String, usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RunStatus {
    Verified,
    Violated,
    Undecided,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Report {
    pub format_version: u32,
    pub sweep: Sweep,
    pub universe: UniverseDescriptor,
    pub config: ConfigEcho,
    pub records: Vec<Record>,
    pub summary: Summary,
    pub status: RunStatus,
}

impl Report {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// One line per count, for `--format text`.
    pub fn to_text(&self) -> String {
        let s = &self.summary;
        let mut out = format!(
            "status: {:?}\ngraphs: {}\nchecks: {}\nfound: {}\nnot_found: {}\nundecided: {}\nnot_applicable: {}\n",
            self.status, s.graphs, s.checks, s.found, s.not_found, s.undecided, s.not_applicable
        );
        if s.rejected > 0 {
            out.push_str(&format!("rejected: {}\n", s.rejected));
        }
        if s.audited > 0 {
            out.push_str(&format!(
                "audited: {}\nanomalies: {}\n",
                s.audited, s.anomalies
            ));
            for (step, count) in &s.first_violations {
                out.push_str(&format!("  first violation {step}: {count}\n"));
            }
        }
        out
    }
}

/// Runs `sweep` over every graph of the universe.
pub fn run_sweep(sweep: Sweep, universe: &Universe, cfg: &SweepConfig) -> Report {
    let work = |g: &Graph| -> Record {
        #[cfg(not(target_arch = "wasm32"))]
        let start = Instant::now();
        let checks = check_graph(sweep, g, cfg.budget);
        #[cfg(not(target_arch = "wasm32"))]
        let micros = cfg.timings.then(|| start.elapsed().as_micros() as u64);
        #[cfg(target_arch = "wasm32")]
        let micros = None;
        Record {
            graph6: graph6::encode(g).expect("universe graphs come from graph6 or enumeration"),
            n: g.order(),
            checks,
            micros,
        }
    };
    let records = map_in_order(&universe.graphs, cfg.jobs, work);
    let summary = summarize(&records);
    let status = if summary.not_found + summary.rejected + summary.anomalies > 0 {
        RunStatus::Violated
    } else if summary.undecided > 0 {
        RunStatus::Undecided
    } else {
        RunStatus::Verified
    };
    Report {
        format_version: FORMAT_VERSION,
        sweep,
        universe: universe.descriptor.clone(),
        config: ConfigEcho {
            seed: cfg.seed,
            budget: cfg.budget,
        },
        records,
        summary,
        status,
    }
}

#[cfg(feature = "parallel")]
fn map_in_order<F>(graphs: &[Graph], jobs: usize, work: F) -> Vec<Record>
where
    F: Fn(&Graph) -> Record + Sync,
{
    use rayon::prelude::*;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .expect("thread pool");
    pool.install(|| graphs.par_iter().map(&work).collect())
}

#[cfg(not(feature = "parallel"))]
fn map_in_order<F>(graphs: &[Graph], _jobs: usize, work: F) -> Vec<Record>
where
    F: Fn(&Graph) -> Record,
{
    graphs.iter().map(work).collect()
}

pub fn verify_theorem4(n_min: usize, n_max: usize, cfg: &SweepConfig) -> Result<Report, GenError> {
    Ok(run_sweep(
        Sweep::Theorem4,
        &Universe::enumerated(n_min, n_max, true)?,
        cfg,
    ))
}

pub fn verify_quiroz(n_min: usize, n_max: usize, cfg: &SweepConfig) -> Result<Report, GenError> {
    Ok(run_sweep(
        Sweep::C4Free,
        &Universe::enumerated(n_min, n_max, false)?,
        cfg,
    ))
}

pub fn probe_conjecture_kll(
    n_min: usize,
    n_max: usize,
    ell: usize,
    cfg: &SweepConfig,
) -> Result<Report, GenError> {
    Ok(run_sweep(
        Sweep::Kll { ell },
        &Universe::enumerated(n_min, n_max, true)?,
        cfg,
    ))
}

pub fn audit_sweep(
    n_min: usize,
    n_max: usize,
    ell: Option<usize>,
    cfg: &SweepConfig,
) -> Result<Report, GenError> {
    Ok(run_sweep(
        Sweep::Audit { ell },
        &Universe::enumerated(n_min, n_max, true)?,
        cfg,
    ))
}

fn not_applicable(check: impl Into<String>, reason: impl Into<String>) -> Check {
    Check {
        check: check.into(),
        status: Status::NotApplicable {
            reason: reason.into(),
        },
    }
}

fn check_graph(sweep: Sweep, g: &Graph, budget: Budget) -> Vec<Check> {
    let n = g.order();
    let alpha = independence_number(g);
    let half = n.div_ceil(2);
    match sweep {
        Sweep::Theorem4 => {
            if alpha != 2 {
                return vec![not_applicable("*", format!("alpha = {alpha}"))];
            }
            (1..=half / 2)
                .map(|ell| {
                    search(
                        g,
                        &TargetSpec::CompleteBipartite {
                            s: ell,
                            t: half - ell,
                        },
                        budget,
                        false,
                    )
                })
                .collect()
        }
        Sweep::C4Free => {
            let spec = TargetSpec::Clique { k: half };
            if alpha > 2 {
                vec![not_applicable(spec.to_string(), format!("alpha = {alpha}"))]
            } else if has_induced_c4(g) {
                vec![not_applicable(spec.to_string(), "induced C4")]
            } else {
                vec![search(g, &spec, budget, false)]
            }
        }
        Sweep::Kll { ell } => {
            if alpha != 2 {
                return vec![not_applicable(
                    format!("kll:{ell},*"),
                    format!("alpha = {alpha}"),
                )];
            }
            let chi = chromatic_number_alpha2(g).expect("alpha is two");
            if ell == 0 || 2 * ell > chi {
                return vec![not_applicable(
                    format!("kll:{ell},*"),
                    format!("chi = {chi} < 2 ell"),
                )];
            }
            vec![search(
                g,
                &TargetSpec::CliqueToppedBipartite {
                    m: ell,
                    t: chi - ell,
                },
                budget,
                true,
            )]
        }
        Sweep::Audit { ell } => {
            let ells: Vec<usize> = match ell {
                Some(e) => vec![e],
                None => (1..=half / 2).collect(),
            };
            ells.into_iter().map(|e| audit(g, e, budget)).collect()
        }
    }
}

/// One search, re-verified. With `retry`, a negative or undecided answer is repeated once
/// with twice the budget before it is reported.
fn search(g: &Graph, spec: &TargetSpec, budget: Budget, retry: bool) -> Check {
    let h = make_target(spec).expect("sweep targets are valid");
    let mut outcome = find_target_immersion(g, spec, budget).expect("sweep targets are valid");
    if retry && !outcome.is_found() {
        outcome =
            find_target_immersion(g, spec, budget.doubled()).expect("sweep targets are valid");
    }
    let status = match outcome {
        SearchOutcome::Found(cert) => match verify_certificate(g, &h, &cert) {
            Ok(()) => Status::Found {
                digest: cert.digest(),
            },
            Err(v) => Status::Rejected {
                reason: v.code().to_string(),
            },
        },
        SearchOutcome::NotFound => Status::NotFound,
        SearchOutcome::Undecided => Status::Undecided,
    };
    Check {
        check: spec.to_string(),
        status,
    }
}

fn audit(g: &Graph, ell: usize, budget: Budget) -> Check {
    let check = format!("ell={ell}");
    let status = match audit_proof_with(
        g,
        ell,
        AuditOptions {
            full: false,
            budget,
        },
    ) {
        Ok(a) => match a.first_violation {
            Some(step) => Status::Audited {
                first_violation: step.name().to_string(),
            },
            None => Status::Anomaly,
        },
        Err(AuditError::Undecided) => Status::Undecided,
        Err(e) => Status::NotApplicable {
            reason: e.to_string(),
        },
    };
    Check { check, status }
}

fn summarize(records: &[Record]) -> Summary {
    let mut s = Summary {
        graphs: records.len(),
        ..Summary::default()
    };
    for c in records.iter().flat_map(|r| &r.checks) {
        s.checks += 1;
        match &c.status {
            Status::Found { .. } => s.found += 1,
            Status::NotFound => s.not_found += 1,
            Status::Undecided => s.undecided += 1,
            Status::NotApplicable { .. } => s.not_applicable += 1,
            Status::Rejected { .. } => s.rejected += 1,
            Status::Audited { first_violation } => {
                s.audited += 1;
                *s.first_violations
                    .entry(first_violation.clone())
                    .or_default() += 1;
            }
            Status::Anomaly => {
                s.audited += 1;
                s.anomalies += 1;
            }
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> SweepConfig {
        SweepConfig::default()
    }

    #[test]
    fn theorem4_small_orders() {
        let report = verify_theorem4(5, 7, &cfg()).unwrap();
        assert_eq!(report.status, RunStatus::Verified);
        assert_eq!(report.summary.not_found, 0);
        assert_eq!(report.summary.found, report.summary.checks);
        // n = 5 has only ell = 1, with target K_{1,2}
        let first = &report.records[0];
        assert_eq!(first.n, 5);
        assert_eq!(first.checks.len(), 1);
        assert_eq!(first.checks[0].check, "kst:1,2");
    }

    #[test]
    fn even_orders_share_targets_with_the_order_below() {
        for n in [6usize, 8, 10] {
            assert_eq!(n.div_ceil(2), (n - 1).div_ceil(2));
        }
        let report = verify_theorem4(6, 6, &cfg()).unwrap();
        assert!(report.records.iter().all(|r| r
            .checks
            .iter()
            .map(|c| &c.check)
            .eq(["kst:1,2"].iter())));
    }

    #[test]
    fn c4free_sweep_skips_induced_c4() {
        let report = verify_quiroz(4, 6, &cfg()).unwrap();
        assert_eq!(report.status, RunStatus::Verified);
        assert!(report.summary.not_applicable > 0 && report.summary.found > 0);
        let file = Universe::from_graph6("inline", "Dhc\n").unwrap();
        let r = run_sweep(Sweep::C4Free, &file, &cfg());
        assert!(matches!(
            r.records[0].checks[0].status,
            Status::Found { .. }
        ));
        assert_eq!(r.records[0].checks[0].check, "clique:3");
    }

    #[test]
    fn kll_and_audit_sweeps() {
        let r = probe_conjecture_kll(5, 7, 1, &cfg()).unwrap();
        assert_eq!(r.status, RunStatus::Verified);
        let r = audit_sweep(5, 7, None, &cfg()).unwrap();
        assert_eq!(r.status, RunStatus::Verified);
        assert_eq!(r.summary.anomalies, 0);
        assert_eq!(r.summary.audited, r.summary.checks);
        assert_eq!(r.summary.first_violations.get("odd_order"), Some(&37));
    }

    #[test]
    fn reports_do_not_depend_on_worker_count() {
        let one = SweepConfig { jobs: 1, ..cfg() };
        let four = SweepConfig { jobs: 4, ..cfg() };
        let a = verify_theorem4(5, 7, &one).unwrap().to_json();
        let b = verify_theorem4(5, 7, &four).unwrap().to_json();
        assert_eq!(a, b);
        assert!(a.contains(r#""format_version": 1"#));
        assert!(!a.contains("micros"));
    }

    #[test]
    fn undecided_and_violations_set_the_run_status() {
        let tiny = SweepConfig {
            budget: Budget::nodes(1),
            ..cfg()
        };
        let r = run_sweep(
            Sweep::C4Free,
            &Universe::from_graph6("inline", "Dhc\n").unwrap(),
            &tiny,
        );
        assert_eq!(r.status, RunStatus::Undecided);
        let c5 = graph6::encode(&Graph::cycle(5).unwrap().complement()).unwrap();
        let r = run_sweep(
            Sweep::Theorem4,
            &Universe::from_graph6("inline", &c5).unwrap(),
            &cfg(),
        );
        assert_eq!(r.status, RunStatus::Verified);
        let k4 = graph6::encode(&Graph::complete(4).unwrap()).unwrap();
        let r = run_sweep(
            Sweep::Theorem4,
            &Universe::from_graph6("inline", &k4).unwrap(),
            &cfg(),
        );
        assert_eq!(r.summary.not_applicable, 1);
    }

    #[test]
    fn random_universe_is_seeded() {
        let a = Universe::random(8, 5, 7);
        let b = Universe::random(8, 5, 7);
        assert_eq!(a.graphs, b.graphs);
        assert_eq!(
            a.descriptor,
            UniverseDescriptor::Random {
                n: 8,
                count: 5,
                seed: 7
            }
        );
    }
}
