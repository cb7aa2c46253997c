//! Empirical check of how far the best contiguous schedule can fall behind the
//! optimum on small random instances.

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::generators::{gen_random, GenMode, Generated};
use crate::model::json::{format_q, instance_to_value};
use crate::model::{q, qr, Instance, Q};
use crate::oracles::{oracle_two_free, oracle_two_free_assigned, SearchBudget};
use crate::{Error, Result};

/// Ratio above which a trial is flagged.
pub fn flag_threshold() -> Q {
    qr(4, 3)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProbeParams {
    pub min_n: usize,
    pub max_n: usize,
    pub max_length: i64,
    pub speeds: Vec<Q>,
    pub budget: SearchBudget,
}

impl Default for ProbeParams {
    fn default() -> Self {
        ProbeParams {
            min_n: 1,
            max_n: 6,
            max_length: 12,
            speeds: vec![q(1), qr(3, 2), q(2), q(5), q(18)],
            budget: SearchBudget::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProbeReport {
    pub trials: usize,
    pub completed: usize,
    /// Set when at least one trial hit the search budget and was skipped.
    pub truncated: bool,
    pub max_ratio: Q,
    pub witness_seed: Option<u64>,
    pub witness: Option<Instance>,
    /// Trial seeds whose ratio exceeded 4/3.
    pub flagged: Vec<(u64, Q)>,
    /// `(s, (4 + 4/s) / (3 + 9/s))` for each probed speed.
    pub family: Vec<(Q, Q)>,
}

impl ProbeReport {
    pub fn to_value(&self) -> Value {
        json!({
            "trials": self.trials,
            "completed": self.completed,
            "truncated": self.truncated,
            "max_ratio": format_q(self.max_ratio),
            "witness_seed": self.witness_seed,
            "witness": self.witness.as_ref().map(instance_to_value),
            "flagged": self.flagged.iter().map(|(s, r)| json!({"seed": s, "ratio": format_q(*r)})).collect::<Vec<_>>(),
            "family": self.family.iter().map(|(s, r)| json!({"s": format_q(*s), "ratio": format_q(*r)})).collect::<Vec<_>>(),
        })
    }
}

/// Contiguous-to-optimal ratio of the adversarial example family at speed `s`.
pub fn family_ratio(s: Q) -> Q {
    (q(4) + q(4) / s) / (q(3) + q(9) / s)
}

/// `(best contiguous makespan, optimum)`; the contiguous best gives `R0` a
/// prefix of each pad and routes every such split optimally.
pub fn contiguous_vs_optimal(inst: &Instance, budget: &SearchBudget) -> Result<(Q, Q)> {
    let opt = oracle_two_free(inst, budget)?.makespan;
    let (n1, n) = (inst.n1(), inst.n());
    let mut best: Option<Q> = None;
    for j in 0..=n1 {
        for jp in n1..=n {
            let r0: Vec<usize> = (1..=j).chain(n1 + 1..=jp).collect();
            let c = oracle_two_free_assigned(inst, budget, &r0)?.makespan;
            if best.is_none_or(|b| c < b) {
                best = Some(c);
            }
        }
    }
    Ok((best.unwrap_or(opt), opt))
}

pub fn ratio(contiguous: Q, opt: Q) -> Q {
    if opt.is_zero() {
        Q::one()
    } else {
        contiguous / opt
    }
}

/// Runs `trials` random trials; trial `i` is fully determined by `seed + i`.
pub fn conjecture_probe(seed: u64, trials: usize, params: &ProbeParams) -> Result<ProbeReport> {
    if params.min_n > params.max_n || params.speeds.is_empty() || params.max_length < 1 {
        return Err(Error::Invalid("empty probe parameter range".into()));
    }
    if params.max_n > params.budget.max_piles {
        return Err(Error::Resource(format!("max_n {} exceeds the oracle pile cap {}", params.max_n, params.budget.max_piles)));
    }
    let mut report = ProbeReport {
        trials,
        completed: 0,
        truncated: false,
        max_ratio: Q::zero(),
        witness_seed: None,
        witness: None,
        flagged: Vec::new(),
        family: params.speeds.iter().map(|&s| (s, family_ratio(s))).collect(),
    };
    for i in 0..trials {
        let trial_seed = seed.wrapping_add(i as u64);
        let mut rng = ChaCha8Rng::seed_from_u64(trial_seed);
        let n = rng.gen_range(params.min_n..=params.max_n);
        let min_len = std::cmp::max(1, (n as i64 + 1) / 2);
        let length = rng.gen_range(std::cmp::min(min_len, params.max_length)..=params.max_length);
        if n as i64 > 2 * length {
            return Err(Error::Invalid(format!("{} piles do not fit on a rail of length {}", n, length)));
        }
        let speed = params.speeds[rng.gen_range(0..params.speeds.len())];
        let Generated::Placed(inst) = gen_random(trial_seed, n, length, speed, GenMode::Free)? else {
            unreachable!("free mode yields placed instances")
        };
        let (c, opt) = match contiguous_vs_optimal(&inst, &params.budget) {
            Ok(v) => v,
            Err(Error::Resource(_)) => {
                report.truncated = true;
                continue;
            }
            Err(e) => return Err(e),
        };
        report.completed += 1;
        let r = ratio(c, opt);
        if r > flag_threshold() {
            report.flagged.push((trial_seed, r));
        }
        if report.witness_seed.is_none() || r > report.max_ratio {
            report.max_ratio = r;
            report.witness_seed = Some(trial_seed);
            report.witness = Some(inst);
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn speed_family_ratio() {
        let inst = Instance::new(6, q(18), &[(0, 1), (1, 2), (2, 4), (4, 5), (5, 6)], &[]);
        let (c, opt) = contiguous_vs_optimal(&inst, &SearchBudget::default()).unwrap();
        assert_eq!((c, opt), (qr(38, 9), qr(7, 2)));
        assert_eq!(ratio(c, opt), qr(76, 63));
        assert_eq!(family_ratio(q(18)), qr(76, 63));
    }

    #[test]
    fn single_pile_ratio_is_one() {
        for (p1, p2) in [(vec![(1, 4)], vec![]), (vec![], vec![(0, 7)])] {
            let inst = Instance::new(8, q(3), &p1, &p2);
            let (c, opt) = contiguous_vs_optimal(&inst, &SearchBudget::default()).unwrap();
            assert_eq!(ratio(c, opt), q(1));
        }
    }

    #[test]
    fn small_probe_is_deterministic() {
        let params = ProbeParams { max_n: 4, ..ProbeParams::default() };
        let a = conjecture_probe(7, 10, &params).unwrap();
        assert_eq!(a, conjecture_probe(7, 10, &params).unwrap());
        assert_eq!(a.completed, 10);
        assert!(a.max_ratio >= q(1));
        assert_eq!(a.family.len(), params.speeds.len());
    }

    #[test]
    fn budget_truncates() {
        let params = ProbeParams { min_n: 3, max_n: 3, budget: SearchBudget { max_nodes: 1, ..SearchBudget::default() }, ..ProbeParams::default() };
        let r = conjecture_probe(1, 3, &params).unwrap();
        assert!(r.truncated);
        assert_eq!(r.completed, 0);
    }
}
