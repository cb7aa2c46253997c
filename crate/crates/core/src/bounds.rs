//! Lower bounds on the makespan and the occupancy decomposition of the rail.

use num_traits::{One, Zero};

use crate::model::{q, Instance, Q, Stockpile};

/// Lower bound for one reclaimer: reach the farthest endpoint and come back,
/// reclaiming every pile once at unit speed.
pub fn single_reclaimer_lower_bound(inst: &Instance) -> Q {
    let s = inst.speed;
    let work: i64 = inst.total_length();
    q(2 * inst.max_right()) / s + q(work) - q(work) / s
}

/// How many pads are occupied over a stretch of rail.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Cover {
    Empty,
    One,
    Two,
}

impl Cover {
    /// Cost per unit length of visiting this stretch out and back with
    /// everything on it reclaimed.
    pub fn round_trip_rate(self, s: Q) -> Q {
        match self {
            Cover::Empty => q(2) / s,
            Cover::One => Q::one() + Q::one() / s,
            Cover::Two => q(2),
        }
    }
}

/// Maximal stretches `[a, b]` of `[0, L]` with constant cover, left to right.
pub fn cover_segments(inst: &Instance) -> Vec<(i64, i64, Cover)> {
    let mut cuts: Vec<i64> = vec![0, inst.length];
    cuts.extend(inst.piles().flat_map(|p| [p.l, p.r]));
    cuts.sort_unstable();
    cuts.dedup();
    let covered = |piles: &[Stockpile], idx: &mut usize, a: i64, b: i64| -> bool {
        while *idx < piles.len() && piles[*idx].r <= a {
            *idx += 1;
        }
        *idx < piles.len() && piles[*idx].l <= a && b <= piles[*idx].r
    };
    let (mut i1, mut i2) = (0, 0);
    let mut out: Vec<(i64, i64, Cover)> = Vec::new();
    for w in cuts.windows(2) {
        let (a, b) = (w[0], w[1]);
        let c = match (covered(&inst.pad1, &mut i1, a, b), covered(&inst.pad2, &mut i2, a, b)) {
            (false, false) => Cover::Empty,
            (true, true) => Cover::Two,
            _ => Cover::One,
        };
        match out.last_mut() {
            Some(last) if last.2 == c && last.1 == a => last.1 = b,
            _ => out.push((a, b, c)),
        }
    }
    out
}

/// Rail split into one-sided (`q1`), two-sided (`q2`) and empty (`e`) parts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OccupancyDecomposition {
    pub q1: Vec<(i64, i64)>,
    pub q2: Vec<(i64, i64)>,
    pub e: Vec<(i64, i64)>,
    pub len_q1: i64,
    pub len_q2: i64,
    pub len_e: i64,
}

pub fn occupancy_decomposition(inst: &Instance) -> OccupancyDecomposition {
    let mut d = OccupancyDecomposition {
        q1: vec![],
        q2: vec![],
        e: vec![],
        len_q1: 0,
        len_q2: 0,
        len_e: 0,
    };
    for (a, b, c) in cover_segments(inst) {
        let (list, len) = match c {
            Cover::Empty => (&mut d.e, &mut d.len_e),
            Cover::One => (&mut d.q1, &mut d.len_q1),
            Cover::Two => (&mut d.q2, &mut d.len_q2),
        };
        list.push((a, b));
        *len += b - a;
    }
    d
}

/// Preemptive lower bounds: `k0` when every empty gap is crossed, one value per
/// gap that is left unvisited, and their minimum.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PreemptiveBounds {
    pub k0: Q,
    pub k_per_gap: Vec<Q>,
    pub k_star: Q,
    /// Index into the decomposition's `e` list, `None` when `k0` is the minimum.
    pub argmin: Option<usize>,
}

/// Cumulative round-trip cost from 0 to `x`.
pub(crate) fn round_trip_cost(segs: &[(i64, i64, Cover)], s: Q, x: Q) -> Q {
    let mut acc = Q::zero();
    for &(a, b, c) in segs {
        if q(a) >= x {
            break;
        }
        let hi = std::cmp::min(q(b), x);
        acc += (hi - q(a)) * c.round_trip_rate(s);
    }
    acc
}

pub fn preemptive_bounds(inst: &Instance) -> PreemptiveBounds {
    let segs = cover_segments(inst);
    let s = inst.speed;
    let total = round_trip_cost(&segs, s, q(inst.length));
    let k0 = total / q(2);
    let mut k_per_gap = Vec::new();
    for &(a, b, c) in &segs {
        if c == Cover::Empty {
            let left = round_trip_cost(&segs, s, q(a));
            let right = total - round_trip_cost(&segs, s, q(b));
            k_per_gap.push(std::cmp::max(left, right));
        }
    }
    let mut k_star = k0;
    let mut argmin = None;
    for (i, &k) in k_per_gap.iter().enumerate() {
        if k < k_star {
            k_star = k;
            argmin = Some(i);
        }
    }
    PreemptiveBounds { k0, k_per_gap, k_star, argmin }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::qr;

    fn zigzag() -> Instance {
        Instance::new(12, q(5), &[(0, 2), (2, 12)], &[(0, 10), (10, 12)])
    }

    #[test]
    fn single_bound_values() {
        assert_eq!(single_reclaimer_lower_bound(&Instance::new(10, q(2), &[], &[])), q(0));
        let inst = Instance::new(6, q(2), &[(0, 2), (4, 6)], &[(1, 3)]);
        assert_eq!(single_reclaimer_lower_bound(&inst), q(9));
        assert_eq!(single_reclaimer_lower_bound(&zigzag()), q(24));
    }

    #[test]
    fn decomposition_examples() {
        let d = occupancy_decomposition(&zigzag());
        assert_eq!((d.q1.clone(), d.q2.clone(), d.e.clone()), (vec![], vec![(0, 12)], vec![]));
        let d = occupancy_decomposition(&Instance::new(6, q(2), &[(0, 2)], &[(4, 6)]));
        assert_eq!(d.q1, vec![(0, 2), (4, 6)]);
        assert_eq!(d.e, vec![(2, 4)]);
        assert!(d.q2.is_empty());
        let d = occupancy_decomposition(&Instance::new(5, q(2), &[], &[]));
        assert_eq!(d.e, vec![(0, 5)]);
    }

    #[test]
    fn one_sided_stretches_merge_across_pads() {
        let d = occupancy_decomposition(&Instance::new(6, q(2), &[(0, 2)], &[(2, 4)]));
        assert_eq!(d.q1, vec![(0, 4)]);
        assert_eq!(d.e, vec![(4, 6)]);
    }

    #[test]
    fn preemptive_examples() {
        let b = preemptive_bounds(&zigzag());
        assert_eq!((b.k0, b.k_star, b.argmin), (q(12), q(12), None));
        let b = preemptive_bounds(&Instance::new(6, q(2), &[(0, 2)], &[(4, 6)]));
        assert_eq!((b.k0, b.k_per_gap.clone(), b.k_star, b.argmin), (q(4), vec![q(3)], q(3), Some(0)));
        let b = preemptive_bounds(&Instance::new(10, q(5), &[(0, 10)], &[(0, 10)]));
        assert_eq!(b.k_star, q(10));
        let b = preemptive_bounds(&Instance::new(5, qr(5, 2), &[], &[]));
        assert_eq!(b.k0, q(2));
    }
}
