use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::{CoverVerdict, Elem, ElemSet, Fuel, SiteError, Space};

/// An instance on which a formal-topology axiom fails. Sieves are listed by
/// their maximal elements.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum TopologyViolation {
    Maximality { a: String },
    Stability { a: String, b: String, sieve: Vec<String> },
    LocalCharacter { a: String, r: Vec<String>, s: Vec<String> },
    /// The fuel-bounded answer contradicts the exact cover test.
    Fuel { a: String, sieve: Vec<String> },
    /// Cover by the presentation differs from the cover relation.
    Presentation { a: String, sieve: Vec<String> },
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TopologyReport {
    /// Decided `(a, S)` pairs plus the `(a, R, S)` triples tested for local character.
    pub instances: usize,
    /// Pairs whose fuel-bounded search neither succeeded nor saturated.
    pub unreached: usize,
    pub violations: Vec<TopologyViolation>,
}

impl TopologyReport {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks maximality, stability and local character on every sieve of every
/// element whose fuel-bounded cover search is decided, and agreement with the
/// presentation when there is one.
pub fn check_topology(space: &Space, fuel: Fuel, cap: usize) -> Result<TopologyReport, SiteError> {
    let b = space.basis();
    let gens = |s: &ElemSet| -> Vec<String> {
        b.maximal(s).into_iter().map(|e| b.label(e).to_string()).collect()
    };
    let mut report = TopologyReport::default();
    let mut sieves: Vec<Vec<ElemSet>> = Vec::with_capacity(b.len());
    let mut cov: Vec<HashMap<ElemSet, Option<bool>>> = Vec::with_capacity(b.len());
    for a in b.elems() {
        let all = b
            .downsets_below(a, cap)
            .ok_or_else(|| SiteError::Malformed(format!("more than {cap} sieves at {}", b.label(a))))?;
        let mut table = HashMap::with_capacity(all.len());
        for s in &all {
            let verdict = match space.cover_set(a, s, fuel) {
                CoverVerdict::Covered(_) => Some(true),
                CoverVerdict::NotCoveredWithinFuel { saturated: true } => Some(false),
                CoverVerdict::NotCoveredWithinFuel { saturated: false } => None,
            };
            match verdict {
                Some(x) => {
                    report.instances += 1;
                    if x != space.covered_by(a, s) {
                        report.violations.push(TopologyViolation::Fuel {
                            a: b.label(a).to_string(),
                            sieve: gens(s),
                        });
                    }
                }
                None => report.unreached += 1,
            }
            if let Some(basic) = space.basic_covers(a) {
                if basic.iter().any(|r| r.is_subset(s)) != space.covered_by(a, s) {
                    report.violations.push(TopologyViolation::Presentation {
                        a: b.label(a).to_string(),
                        sieve: gens(s),
                    });
                }
            }
            table.insert(s.clone(), verdict);
        }
        sieves.push(all);
        cov.push(table);
    }
    let at = |x: Elem, s: &ElemSet| -> Option<bool> {
        cov[x.idx()]
            .get(&b.down_closure(&s.intersection(b.down(x))))
            .copied()
            .flatten()
    };
    for a in b.elems() {
        if at(a, b.down(a)) == Some(false) {
            report.violations.push(TopologyViolation::Maximality {
                a: b.label(a).to_string(),
            });
        }
        let covering: Vec<&ElemSet> = sieves[a.idx()]
            .iter()
            .filter(|s| at(a, s) == Some(true))
            .collect();
        for s in &covering {
            for x in b.down(a).iter() {
                if at(x, s) == Some(false) {
                    report.violations.push(TopologyViolation::Stability {
                        a: b.label(a).to_string(),
                        b: b.label(x).to_string(),
                        sieve: gens(s),
                    });
                }
            }
        }
        for s in &sieves[a.idx()] {
            let good = ElemSet::from_elems(
                b.len(),
                b.down(a).iter().filter(|&x| at(x, s) == Some(true)),
            );
            let verdict = at(a, s);
            for r in &covering {
                report.instances += 1;
                if r.is_subset(&good) && verdict == Some(false) {
                    report.violations.push(TopologyViolation::LocalCharacter {
                        a: b.label(a).to_string(),
                        r: gens(r),
                        s: gens(s),
                    });
                }
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::site::{generate_topology, Basis, CoverRule, CoveringSystem};

    fn chain() -> CoveringSystem {
        let labels = ["top", "l", "r"].map(String::from).to_vec();
        let basis = Basis::from_relation(labels, [(Elem(1), Elem(0)), (Elem(2), Elem(0))]).unwrap();
        CoveringSystem::new(basis, vec![vec![vec![Elem(1), Elem(2)]], vec![], vec![]]).unwrap()
    }

    #[test]
    fn generated_topology_satisfies_the_axioms() {
        let space = generate_topology(&chain().repair_axiom()).unwrap();
        let r = check_topology(&space, Fuel(8), 1000).unwrap();
        assert!(r.holds(), "{r:?}");
        assert!(r.instances > 0);
    }

    #[test]
    fn broken_rule_is_caught() {
        let c = chain();
        // A uniform rule claiming the top is covered by `l` alone, but not
        // `r` by anything: local character fails for S = ↓l via R = ↓{l, r}.
        let b = c.basis().clone();
        let n = b.len();
        let brackets = vec![
            vec![(1, ElemSet::from_elems(n, [Elem(1)]))],
            vec![],
            vec![],
        ];
        let space = Space::new(b, CoverRule::Uniform { brackets });
        let r = check_topology(&space, Fuel(8), 1000).unwrap();
        assert!(!r.holds());
    }
}
