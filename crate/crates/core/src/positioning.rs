//! Placing piles of given lengths for one reclaimer that must reclaim them in
//! input order, and the matching lower bound.

use num_traits::Zero;

use crate::model::{q, Direction, Instance, PathBuilder, Q, ReclaimAssignment, Reclaimer, ReclaimerPath, Schedule, SolveResult};
use crate::{Error, Result};

/// Pile lengths in reclaim order, with the rail length and travel speed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LengthsInstance {
    pub lengths: Vec<i64>,
    pub length: i64,
    pub speed: Q,
}

impl LengthsInstance {
    pub fn total(&self) -> i64 {
        self.lengths.iter().sum()
    }

    /// `P^t` for `t = 0..=n`.
    pub fn prefix_sums(&self) -> Vec<i64> {
        let mut out = Vec::with_capacity(self.lengths.len() + 1);
        out.push(0);
        for &p in &self.lengths {
            out.push(out[out.len() - 1] + p);
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Feasibility {
    /// Total length at most `3L/2`: a placement always exists.
    Guaranteed,
    /// Not decided here.
    Unknown,
    /// Total length above `2L`, or a pile longer than the rail.
    Infeasible,
}

pub fn check_positioning_feasibility(inst: &LengthsInstance) -> Feasibility {
    let total = inst.total();
    if total > 2 * inst.length || inst.lengths.iter().any(|&p| p > inst.length) {
        Feasibility::Infeasible
    } else if 2 * total <= 3 * inst.length {
        Feasibility::Guaranteed
    } else {
        Feasibility::Unknown
    }
}

/// `P + min_t |P^t - (P - P^t)| / s`; no placement does better.
pub fn positioning_lower_bound(inst: &LengthsInstance) -> Q {
    let total = inst.total();
    let best = inst.prefix_sums().iter().map(|&pt| (2 * pt - total).abs()).min().unwrap_or(0);
    q(total) + q(best) / inst.speed
}

/// A placement together with its reclaim schedule.
#[derive(Debug, Clone)]
pub struct Positioning {
    /// Placed piles, chained in input order.
    pub instance: Instance,
    /// `order[i]` is the pile id given to the `i`-th length.
    pub order: Vec<usize>,
    /// 1 when the split fits on the rail, 2 when the split pile goes alone on `P2`.
    pub case: u8,
    /// The split index `k`, 1-based; 0 for an empty input.
    pub split: usize,
    pub result: SolveResult,
}

/// The unique `k` in `1..=n` with `P^{k-1} <= P - P^k` and `P^k > P - P^{k+1}`,
/// reading `P^{n+1}` as `P`.
pub fn split_index(prefix: &[i64]) -> usize {
    let n = prefix.len() - 1;
    let total = prefix[n];
    let at = |t: usize| if t > n { total } else { prefix[t] };
    (1..=n).find(|&k| at(k - 1) + at(k) <= total && at(k) + at(k + 1) > total).unwrap_or(n)
}

/// Forward-backward placement: optimal whenever the total length is at most
/// `3L/2`. Reclaims every pile of the chain forward on the way out and backward
/// on the way in.
pub fn fb_positioning(inst: &LengthsInstance) -> Result<Positioning> {
    if inst.lengths.iter().any(|&p| p <= 0) {
        return Err(Error::Invalid("pile lengths must be positive".into()));
    }
    if check_positioning_feasibility(inst) != Feasibility::Guaranteed {
        return Err(Error::Infeasible(format!(
            "total length {} exceeds 3L/2 = {}/2; a placement is not guaranteed",
            inst.total(),
            3 * inst.length
        )));
    }
    let n = inst.lengths.len();
    let pre = inst.prefix_sums();
    let total = pre[n];
    let suf = |t: usize| total - pre[t];
    // (pad, l, r, direction) per input index.
    let mut place: Vec<(u8, i64, i64, Direction)> = Vec::with_capacity(n);
    let (mut case, mut k) = (1, 0);
    if n > 0 {
        k = split_index(&pre);
        let forward = |i: usize| (1u8, pre[i - 1], pre[i], Direction::LeftToRight);
        let backward = |i: usize, shift: i64, pad: u8| (pad, shift + suf(i), shift + suf(i - 1), Direction::RightToLeft);
        if std::cmp::min(pre[k], suf(k - 1)) <= inst.length {
            let cut = if pre[k] < suf(k - 1) { k } else { k - 1 };
            place.extend((1..=cut).map(forward));
            place.extend((cut + 1..=n).map(|i| backward(i, 0, 2)));
        } else {
            case = 2;
            let pk = inst.lengths[k - 1];
            place.extend((1..k).map(forward));
            place.push((2, std::cmp::max(total - 2 * pk, 0), std::cmp::max(total - pk, pk), Direction::LeftToRight));
            place.extend((k + 1..=n).map(|i| backward(i, pre[k - 1], 1)));
        }
    }
    let mut pads: [Vec<(i64, i64, usize)>; 2] = [Vec::new(), Vec::new()];
    for (i, &(pad, l, r, _)) in place.iter().enumerate() {
        pads[pad as usize - 1].push((l, r, i));
    }
    pads.iter_mut().for_each(|v| v.sort());
    let mut order = vec![0; n];
    for (id, &(_, _, i)) in pads[0].iter().chain(&pads[1]).enumerate() {
        order[i] = id + 1;
    }
    let strip = |v: &[(i64, i64, usize)]| v.iter().map(|&(l, r, _)| (l, r)).collect::<Vec<_>>();
    let instance = Instance::new(inst.length, inst.speed, &strip(&pads[0]), &strip(&pads[1])).with_precedence(order.clone());

    let mut b = PathBuilder::new(q(0), inst.speed);
    let mut assignments = Vec::with_capacity(n);
    for (i, &(_, l, r, dir)) in place.iter().enumerate() {
        let (from, to) = if dir == Direction::LeftToRight { (l, r) } else { (r, l) };
        b.travel_to(q(from));
        let t_start = b.time();
        b.reclaim_to(q(to));
        assignments.push(ReclaimAssignment { pile: order[i], reclaimer: Reclaimer::R0, t_start, t_end: b.time(), direction: dir });
    }
    b.travel_to(Q::zero());
    let schedule = Schedule { paths: [b.finish(), ReclaimerPath::parked(inst.length)], assignments };
    let result = SolveResult::new(schedule, "fb-positioning", format!("case {} split at {}", case, k));
    let bound = positioning_lower_bound(inst);
    if result.makespan != bound {
        return Err(Error::Infeasible(format!("placement reached {} instead of the bound {}", result.makespan, bound)));
    }
    Ok(Positioning { instance, order, case, split: k, result })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{validate_instance, validate_schedule, Mode};

    fn li(lengths: &[i64], length: i64, speed: i64) -> LengthsInstance {
        LengthsInstance { lengths: lengths.to_vec(), length, speed: q(speed) }
    }

    #[test]
    fn feasibility_classes() {
        assert_eq!(check_positioning_feasibility(&li(&[6, 6, 6], 10, 1)), Feasibility::Unknown);
        assert_eq!(check_positioning_feasibility(&li(&[2, 5, 1], 6, 1)), Feasibility::Guaranteed);
        assert_eq!(check_positioning_feasibility(&li(&[5, 5, 5], 7, 1)), Feasibility::Infeasible);
    }

    #[test]
    fn lower_bounds() {
        assert_eq!(positioning_lower_bound(&li(&[2, 5, 1], 6, 2)), q(10));
        assert_eq!(positioning_lower_bound(&li(&[3, 3], 4, 9)), q(6));
        assert_eq!(positioning_lower_bound(&li(&[1, 8, 1], 8, 2)), q(14));
    }

    fn check(p: &Positioning) {
        assert!(validate_instance(&p.instance).is_empty());
        assert!(validate_schedule(&p.instance, &p.result.schedule, Mode::Precedence).is_empty());
    }

    #[test]
    fn case_one() {
        let p = fb_positioning(&li(&[2, 5, 1], 6, 2)).unwrap();
        assert_eq!((p.case, p.result.makespan), (1, q(10)));
        let spans: Vec<_> = p.order.iter().map(|&id| p.instance.pile(id).map(|s| (s.pad, s.l, s.r)).unwrap()).collect();
        use crate::model::Pad::*;
        assert_eq!(spans, vec![(P1, 0, 2), (P2, 1, 6), (P2, 0, 1)]);
        check(&p);
    }

    #[test]
    fn case_two() {
        let p = fb_positioning(&li(&[1, 8, 1], 8, 2)).unwrap();
        assert_eq!((p.case, p.split, p.result.makespan), (2, 2, q(14)));
        let spans: Vec<_> = p.order.iter().map(|&id| p.instance.pile(id).map(|s| (s.pad, s.l, s.r)).unwrap()).collect();
        use crate::model::Pad::*;
        assert_eq!(spans, vec![(P1, 0, 1), (P2, 0, 8), (P1, 1, 2)]);
        check(&p);
    }

    #[test]
    fn perfect_split() {
        let p = fb_positioning(&li(&[3, 3], 4, 7)).unwrap();
        assert_eq!(p.result.makespan, q(6));
        check(&p);
    }

    #[test]
    fn rejects_crowded_rail() {
        assert!(matches!(fb_positioning(&li(&[6, 6, 6], 10, 1)), Err(Error::Infeasible(_))));
        assert!(matches!(fb_positioning(&li(&[0, 1], 10, 1)), Err(Error::Invalid(_))));
    }

    #[test]
    fn empty_input() {
        let p = fb_positioning(&li(&[], 4, 2)).unwrap();
        assert_eq!(p.result.makespan, q(0));
    }

    #[test]
    fn split_index_matches_argmin() {
        for lengths in [vec![2, 5, 1], vec![1, 8, 1], vec![3, 3], vec![1, 1, 1, 1], vec![7]] {
            let inst = li(&lengths, 100, 1);
            let pre = inst.prefix_sums();
            let k = split_index(&pre);
            let total = inst.total();
            let best = pre.iter().map(|&x| (2 * x - total).abs()).min().unwrap();
            assert!((2 * pre[k] - total).abs() == best || (2 * pre[k - 1] - total).abs() == best);
        }
    }
}
