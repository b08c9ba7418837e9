//! The chain of structural facts a smallest graph without the complete bipartite immersion
//! would have to satisfy, checked one by one on a concrete graph.

use serde::Serialize;
use thiserror::Error;

use crate::graph::Graph;
use crate::immersion::{
    find_kst_immersion, make_target, verify_certificate, Budget, SearchOutcome, TargetSpec,
};
use crate::invariants::{find_induced_c4, independence_number};
use crate::proof::decomposition::{decompose_unchecked, Decomposition};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Verdict {
    Holds,
    Violated { witness: Vec<usize>, detail: String },
    NotApplicable,
}

impl Verdict {
    pub fn is_violated(&self) -> bool {
        matches!(self, Verdict::Violated { .. })
    }

    fn violated(witness: Vec<usize>, detail: impl Into<String>) -> Verdict {
        Verdict::Violated {
            witness,
            detail: detail.into(),
        }
    }
}

/// Both cliques contain a non-neighbor of every common neighbor. Holds on every α-critical
/// graph.
pub fn check_claim2(_g: &Graph, d: &Decomposition) -> Verdict {
    for s in &d.splits {
        if s.x_non.is_empty() {
            return Verdict::violated(vec![s.a], format!("{} is complete to the x-clique", s.a));
        }
        if s.y_non.is_empty() {
            return Verdict::violated(vec![s.a], format!("{} is complete to the y-clique", s.a));
        }
    }
    Verdict::Holds
}

/// The audited steps, in chain order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Step {
    /// The order is odd and at least `4 ell - 1`.
    OddOrder,
    /// Every non-adjacent pair has at most `ell - 2` common neighbors.
    CommonNeighborBound,
    /// Every edge is critical for the independence number.
    AlphaCritical,
    /// Every common neighbor misses a vertex of each clique.
    BothCliquesMissed,
    /// Split-size bounds for every decomposition and common neighbor.
    SplitBounds,
    /// Every common neighborhood is a clique.
    CommonClique,
    /// No induced four-cycle.
    NoInducedC4,
    /// The graph really lacks the target immersion.
    NoImmersion,
}

impl Step {
    pub const ALL: [Step; 8] = [
        Step::OddOrder,
        Step::CommonNeighborBound,
        Step::AlphaCritical,
        Step::BothCliquesMissed,
        Step::SplitBounds,
        Step::CommonClique,
        Step::NoInducedC4,
        Step::NoImmersion,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Step::OddOrder => "odd_order",
            Step::CommonNeighborBound => "common_neighbor_bound",
            Step::AlphaCritical => "alpha_critical",
            Step::BothCliquesMissed => "both_cliques_missed",
            Step::SplitBounds => "split_bounds",
            Step::CommonClique => "common_clique",
            Step::NoInducedC4 => "no_induced_c4",
            Step::NoImmersion => "no_immersion",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StepVerdict {
    pub step: Step,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProofAudit {
    pub ell: usize,
    pub n: usize,
    /// `ceil(n / 2) - 1`, so the target is `K_{ell, m+1-ell}`.
    pub m: usize,
    /// Evaluated steps in chain order; stops after the first violation unless fully evaluated.
    pub verdicts: Vec<StepVerdict>,
    pub first_violation: Option<Step>,
}

impl ProofAudit {
    /// No step failed: the graph would be a genuine counterexample.
    pub fn is_anomaly(&self) -> bool {
        self.first_violation.is_none()
    }

    pub fn verdict(&self, step: Step) -> Option<&Verdict> {
        self.verdicts
            .iter()
            .find(|v| v.step == step)
            .map(|v| &v.verdict)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("audit serializes")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AuditError {
    #[error("independence number is {0}, the audit needs exactly 2")]
    Alpha(usize),
    #[error("ell = {ell} is outside 1 <= 2 ell <= {half}")]
    Ell { ell: usize, half: usize },
    #[error("immersion search is undecided within the budget")]
    Undecided,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[derive(Default)]
pub struct AuditOptions {
    /// Evaluate every step instead of stopping at the first violation.
    pub full: bool,
    pub budget: Budget,
}


/// Short-circuiting audit with the default budget.
pub fn audit_proof(g: &Graph, ell: usize) -> Result<ProofAudit, AuditError> {
    audit_proof_with(g, ell, AuditOptions::default())
}

pub fn audit_proof_with(
    g: &Graph,
    ell: usize,
    opts: AuditOptions,
) -> Result<ProofAudit, AuditError> {
    let alpha = independence_number(g);
    if alpha != 2 {
        return Err(AuditError::Alpha(alpha));
    }
    let n = g.order();
    let half = n.div_ceil(2);
    if ell == 0 || 2 * ell > half {
        return Err(AuditError::Ell { ell, half });
    }
    let m = half - 1;
    let decompositions: Vec<Decomposition> = g
        .non_edges()
        .map(|(x, y)| decompose_unchecked(g, x, y))
        .collect();
    let ctx = Context {
        g,
        ell,
        m,
        decompositions: &decompositions,
    };

    let mut audit = ProofAudit {
        ell,
        n,
        m,
        verdicts: Vec::new(),
        first_violation: None,
    };
    for step in Step::ALL {
        let verdict = ctx.check(step, opts.budget)?;
        if verdict.is_violated() && audit.first_violation.is_none() {
            audit.first_violation = Some(step);
        }
        audit.verdicts.push(StepVerdict { step, verdict });
        if audit.first_violation.is_some() && !opts.full {
            break;
        }
    }
    Ok(audit)
}

struct Context<'a> {
    g: &'a Graph,
    ell: usize,
    m: usize,
    decompositions: &'a [Decomposition],
}

impl Context<'_> {
    fn check(&self, step: Step, budget: Budget) -> Result<Verdict, AuditError> {
        let (g, ell, m) = (self.g, self.ell, self.m);
        let n = g.order();
        // signed so that ell - 2 may be negative
        let cap = ell as i64 - 2;
        Ok(match step {
            Step::OddOrder => {
                if n % 2 == 0 {
                    Verdict::violated(vec![], format!("n = {n} is even"))
                } else if n + 1 < 4 * ell {
                    Verdict::violated(vec![], format!("n = {n} < 4 ell - 1 = {}", 4 * ell - 1))
                } else {
                    Verdict::Holds
                }
            }
            Step::CommonNeighborBound => g
                .non_edges()
                .find_map(|(u, v)| {
                    let common = g.neighbors(u).intersection(g.neighbors(v)).len();
                    (common as i64 > cap).then(|| {
                        Verdict::violated(
                            vec![u, v],
                            format!("{u} and {v} have {common} common neighbors > ell - 2 = {cap}"),
                        )
                    })
                })
                .unwrap_or(Verdict::Holds),
            Step::AlphaCritical => g
                .edges()
                .find(|&(u, v)| independence_number(&g.without_edge(u, v).expect("edge")) == 2)
                .map(|(u, v)| {
                    Verdict::violated(vec![u, v], format!("deleting {u}{v} keeps alpha = 2"))
                })
                .unwrap_or(Verdict::Holds),
            Step::BothCliquesMissed => self
                .decompositions
                .iter()
                .map(|d| match check_claim2(g, d) {
                    Verdict::Violated {
                        mut witness,
                        detail,
                    } => {
                        witness.splice(0..0, [d.x, d.y]);
                        Verdict::violated(witness, format!("pair ({}, {}): {detail}", d.x, d.y))
                    }
                    other => other,
                })
                .find(Verdict::is_violated)
                .unwrap_or(Verdict::Holds),
            Step::SplitBounds => self
                .decompositions
                .iter()
                .find_map(|d| split_bound_violation(d, cap, m))
                .unwrap_or(Verdict::Holds),
            Step::CommonClique => self
                .decompositions
                .iter()
                .find_map(|d| {
                    let c = d.common.to_vec();
                    c.iter().enumerate().find_map(|(i, &a)| {
                        c[i + 1..].iter().find(|&&b| !g.has_edge(a, b)).map(|&b| {
                            Verdict::violated(
                                vec![d.x, d.y, a, b],
                                format!(
                                    "common neighbors {a}, {b} of ({}, {}) are non-adjacent",
                                    d.x, d.y
                                ),
                            )
                        })
                    })
                })
                .unwrap_or(Verdict::Holds),
            Step::NoInducedC4 => match find_induced_c4(g) {
                Some(c) => Verdict::violated(c.to_vec(), "induced four-cycle"),
                None => Verdict::Holds,
            },
            Step::NoImmersion => {
                let t = m + 1 - ell;
                match find_kst_immersion(g, ell, t, budget).expect("target parameters are positive")
                {
                    SearchOutcome::Found(cert) => {
                        let h = make_target(&TargetSpec::CompleteBipartite { s: ell, t })
                            .expect("fits");
                        assert_eq!(
                            verify_certificate(g, &h, &cert),
                            Ok(()),
                            "solver certificate rejected"
                        );
                        Verdict::violated(
                            cert.branch.clone(),
                            format!("K_{{{ell},{t}}} immersion found"),
                        )
                    }
                    SearchOutcome::NotFound => Verdict::Holds,
                    SearchOutcome::Undecided => return Err(AuditError::Undecided),
                }
            }
        })
    }
}

fn split_bound_violation(d: &Decomposition, cap: i64, m: usize) -> Option<Verdict> {
    let pair = format!("pair ({}, {})", d.x, d.y);
    for s in &d.splits {
        let checks = [
            (
                s.x_adj.len() as i64 > cap,
                format!("{pair}: {} x-neighbors of {} > ell - 2", s.x_adj.len(), s.a),
            ),
            (
                s.y_adj.len() as i64 > cap,
                format!("{pair}: {} y-neighbors of {} > ell - 2", s.y_adj.len(), s.a),
            ),
            (
                s.x_non.len() + d.y_side.len() < m + 4,
                format!(
                    "{pair}: {} x-non-neighbors of {} < m + 4 - |Y|",
                    s.x_non.len(),
                    s.a
                ),
            ),
            (
                s.y_non.len() + d.x_side.len() < m + 4,
                format!(
                    "{pair}: {} y-non-neighbors of {} < m + 4 - |X|",
                    s.y_non.len(),
                    s.a
                ),
            ),
        ];
        if let Some((_, detail)) = checks.into_iter().find(|(bad, _)| *bad) {
            return Some(Verdict::violated(vec![d.x, d.y, s.a], detail));
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::proof::decomposition::decompose;

    #[test]
    fn claim2_examples() {
        let c5 = Graph::cycle(5).unwrap();
        assert_eq!(
            check_claim2(&c5, &decompose(&c5, 0, 2).unwrap()),
            Verdict::Holds
        );
        let chord = c5.with_edge(0, 2).unwrap();
        match check_claim2(&chord, &decompose(&chord, 1, 3).unwrap()) {
            Verdict::Violated { witness, .. } => assert_eq!(witness, vec![2]),
            v => panic!("expected a violation, got {v:?}"),
        }
        // two disjoint cliques: every common neighborhood is empty
        let g = Graph::from_edges(5, &[(0, 1), (2, 3), (2, 4), (3, 4)]).unwrap();
        let d = decompose(&g, 0, 2).unwrap();
        assert!(d.common.is_empty());
        assert_eq!(check_claim2(&g, &d), Verdict::Holds);
    }

    #[test]
    fn c5_fails_the_common_neighbor_bound() {
        let audit = audit_proof(&Graph::cycle(5).unwrap(), 1).unwrap();
        assert_eq!(audit.first_violation, Some(Step::CommonNeighborBound));
        match audit.verdict(Step::CommonNeighborBound).unwrap() {
            Verdict::Violated { witness, .. } => assert_eq!(witness, &vec![0, 2]),
            v => panic!("{v:?}"),
        }
        assert_eq!(audit.verdicts.len(), 2);
    }

    #[test]
    fn even_order_fails_first_step() {
        let g = Graph::petersen().complement();
        for ell in 1..=2 {
            let audit = audit_proof(&g, ell).unwrap();
            assert_eq!(audit.first_violation, Some(Step::OddOrder));
        }
        let full = audit_proof_with(
            &g,
            2,
            AuditOptions {
                full: true,
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(full.verdicts.len(), Step::ALL.len());
        assert!(full.verdict(Step::NoImmersion).unwrap().is_violated());
    }

    #[test]
    fn disjoint_cliques_reach_the_immersion_step() {
        let mut edges = vec![(0, 1), (0, 2), (1, 2)];
        edges.extend([(3, 4), (3, 5), (3, 6), (4, 5), (4, 6), (5, 6)]);
        let g = Graph::from_edges(7, &edges).unwrap();
        let audit = audit_proof(&g, 2).unwrap();
        assert_eq!(audit.first_violation, Some(Step::NoImmersion));
        assert!(!audit.is_anomaly());
    }

    #[test]
    fn preconditions() {
        let c5 = Graph::cycle(5).unwrap();
        assert_eq!(
            audit_proof(&c5, 2),
            Err(AuditError::Ell { ell: 2, half: 3 })
        );
        assert_eq!(
            audit_proof(&c5, 0),
            Err(AuditError::Ell { ell: 0, half: 3 })
        );
        assert_eq!(
            audit_proof(&Graph::complete(5).unwrap(), 1),
            Err(AuditError::Alpha(1))
        );
    }

    #[test]
    fn json_names_steps() {
        let audit = audit_proof(&Graph::cycle(5).unwrap(), 1).unwrap();
        let json = audit.to_json();
        assert!(
            json.contains(r#""first_violation":"common_neighbor_bound""#),
            "{json}"
        );
        assert!(json.contains(r#""status":"holds""#));
        assert!(json.contains(r#""witness":[0,2]"#));
    }
}
