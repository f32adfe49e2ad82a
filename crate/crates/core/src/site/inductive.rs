//! Finite inductive definitions `Φ ⊆ Pow(S) × S` and their least closed sets.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::SiteError;

/// A rule `(premises, conclusion)`: if every premise is in the set, so is the conclusion.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rule {
    pub premises: BTreeSet<usize>,
    pub conclusion: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InductiveDefinition {
    carrier: usize,
    rules: Vec<Rule>,
}

impl InductiveDefinition {
    /// Carrier is `{0, …, carrier-1}`.
    pub fn new(carrier: usize, rules: Vec<Rule>) -> Result<Self, SiteError> {
        for r in &rules {
            if r.conclusion >= carrier || r.premises.iter().any(|&p| p >= carrier) {
                return Err(SiteError::UnknownElement(format!("rule {r:?} leaves the carrier")));
            }
        }
        Ok(InductiveDefinition { carrier, rules })
    }

    pub fn carrier(&self) -> usize {
        self.carrier
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    fn check_subset(&self, u: &BTreeSet<usize>) -> Result<(), SiteError> {
        match u.iter().find(|&&x| x >= self.carrier) {
            Some(x) => Err(SiteError::UnknownElement(x.to_string())),
            None => Ok(()),
        }
    }

    /// `I(Φ, U)`: the least Φ-closed set containing `u`, by saturation.
    pub fn close(&self, u: &BTreeSet<usize>) -> Result<BTreeSet<usize>, SiteError> {
        self.check_subset(u)?;
        let mut closed = u.clone();
        loop {
            let before = closed.len();
            for r in &self.rules {
                if !closed.contains(&r.conclusion) && r.premises.is_subset(&closed) {
                    closed.insert(r.conclusion);
                }
            }
            if closed.len() == before {
                return Ok(closed);
            }
        }
    }

    /// Smallest `V ⊆ U` with `a ∈ I(Φ, V)`; ties broken by the lexicographic
    /// order of `V`'s sorted elements.
    pub fn set_compactness_witness(
        &self,
        u: &BTreeSet<usize>,
        a: usize,
    ) -> Result<BTreeSet<usize>, SiteError> {
        if !self.close(u)?.contains(&a) {
            return Err(SiteError::NotDerivable(a.to_string()));
        }
        let pool: Vec<usize> = u.iter().copied().collect();
        for size in 0..=pool.len() {
            let mut idx: Vec<usize> = (0..size).collect();
            loop {
                let v: BTreeSet<usize> = idx.iter().map(|&i| pool[i]).collect();
                if self.close(&v)?.contains(&a) {
                    return Ok(v);
                }
                if !next_combination(&mut idx, pool.len()) {
                    break;
                }
            }
        }
        unreachable!("U itself derives a")
    }
}

/// Advances `idx` to the next k-combination of `0..n` in lexicographic order.
pub(crate) fn next_combination(idx: &mut [usize], n: usize) -> bool {
    let k = idx.len();
    for i in (0..k).rev() {
        if idx[i] < n - k + i {
            idx[i] += 1;
            for j in i + 1..k {
                idx[j] = idx[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Convenience for literals.
pub fn set(xs: &[usize]) -> BTreeSet<usize> {
    xs.iter().copied().collect()
}
