//! Non-preemptive two-reclaimer schedules without a reclaim order: contiguous
//! unimodal schedules and the 2-approximation built on them.
//!
//! A pair `(j, j')` gives `R0` piles `1..=j` of pad `P1` and `n1+1..=j'` of pad
//! `P2`; `R1` takes the rest. Each reclaimer goes out and back once. Routing
//! option 1 reclaims pad `P1` on the way out, option 2 pad `P2`. One reclaimer
//! (`k`) yields: it idles whenever continuing would break the no-pass rule,
//! while the other runs unhindered.

use num_traits::{Signed, Zero};

use crate::model::{q, Direction, Instance, PathBuilder, Q, ReclaimAssignment, Reclaimer, ReclaimerPath, Schedule, SolveResult};
use crate::preemptive_solver::split_point;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PairChoice {
    /// Last pad-`P1` id taken by `R0`; 0 means none.
    pub j: usize,
    /// Last pad-`P2` id taken by `R0`; `n1` means none.
    pub j_prime: usize,
    /// Routing of `R0`.
    pub p: u8,
    /// Routing of `R1`.
    pub q: u8,
    /// The reclaimer that waits when the two would clash.
    pub k: Reclaimer,
}

/// Occupied length on each pad left of `x`, from prefix sums over the piles.
#[derive(Debug, Clone)]
pub struct BoundaryFunctions {
    length: i64,
    speed: Q,
    pads: [Vec<(i64, i64, i64)>; 2],
}

impl BoundaryFunctions {
    pub fn new(inst: &Instance) -> Self {
        let prefix = |v: &[crate::model::Stockpile]| {
            let mut acc = 0;
            v.iter()
                .map(|p| {
                    let before = acc;
                    acc += p.len();
                    (p.l, p.r, before)
                })
                .collect()
        };
        BoundaryFunctions { length: inst.length, speed: inst.speed, pads: [prefix(&inst.pad1), prefix(&inst.pad2)] }
    }

    fn occupied_left(&self, pad: usize, x: i64) -> i64 {
        let v = &self.pads[pad];
        let k = v.partition_point(|&(l, _, _)| l < x);
        if k == 0 {
            return 0;
        }
        let (l, r, before) = v[k - 1];
        before + std::cmp::min(r, x) - l
    }

    fn total(&self, pad: usize) -> i64 {
        self.pads[pad].last().map(|&(l, r, b)| b + r - l).unwrap_or(0)
    }

    /// Time to clear pad `pad` (0 or 1) on `[0, x]` while moving from 0 to `x`.
    pub fn f(&self, pad: usize, x: i64) -> Q {
        let occ = self.occupied_left(pad, x);
        q(occ) + q(x - occ) / self.speed
    }

    /// Time to clear pad `pad` on `[x, L]` while moving from `L` to `x`.
    pub fn g(&self, pad: usize, x: i64) -> Q {
        let occ = self.total(pad) - self.occupied_left(pad, x);
        q(occ) + q(self.length - x - occ) / self.speed
    }
}

/// One move of a planned route: go to `to`, reclaiming `pile` on the way if set.
#[derive(Debug, Clone, Copy)]
struct Leg {
    to: i64,
    pile: Option<(usize, Direction)>,
}

fn push_sweep(legs: &mut Vec<Leg>, p: &crate::model::Stockpile, dir: Direction) {
    let (from, to) = match dir {
        Direction::LeftToRight => (p.l, p.r),
        Direction::RightToLeft => (p.r, p.l),
    };
    legs.push(Leg { to: from, pile: None });
    legs.push(Leg { to, pile: Some((p.id, dir)) });
}

fn routes(inst: &Instance, c: &PairChoice) -> [Vec<Leg>; 2] {
    let n1 = inst.n1();
    let (a1, b1) = (&inst.pad1[..c.j], &inst.pad1[c.j..]);
    let (a2, b2) = (&inst.pad2[..c.j_prime - n1], &inst.pad2[c.j_prime - n1..]);
    use Direction::*;
    let mut left = Vec::new();
    let (out_pad, back_pad) = if c.p == 1 { (a1, a2) } else { (a2, a1) };
    out_pad.iter().for_each(|p| push_sweep(&mut left, p, LeftToRight));
    back_pad.iter().rev().for_each(|p| push_sweep(&mut left, p, RightToLeft));
    left.push(Leg { to: 0, pile: None });
    let mut right = Vec::new();
    let (out_pad, back_pad) = if c.q == 1 { (b1, b2) } else { (b2, b1) };
    out_pad.iter().rev().for_each(|p| push_sweep(&mut right, p, RightToLeft));
    back_pad.iter().for_each(|p| push_sweep(&mut right, p, LeftToRight));
    right.push(Leg { to: inst.length, pile: None });
    [left, right]
}

/// Runs a route at full speed.
fn run_free(legs: &[Leg], start: i64, speed: Q, who: Reclaimer, out: &mut Vec<ReclaimAssignment>) -> ReclaimerPath {
    let mut b = PathBuilder::new(q(start), speed);
    for leg in legs {
        let t_start = b.time();
        match leg.pile {
            None => b.travel_to(q(leg.to)),
            Some((pile, direction)) => {
                b.reclaim_to(q(leg.to));
                out.push(ReclaimAssignment { pile, reclaimer: who, t_start, t_end: b.time(), direction });
            }
        }
    }
    b.finish()
}

/// Earliest `tau >= ready` such that idling at `a` over `[ready, tau]` and then
/// moving straight to `b` over `[tau, tau + d]` stays on or above `lead`.
fn earliest_start(lead: &[(Q, Q)], ready: Q, a: Q, b: Q, d: Q) -> Option<Q> {
    let w = (b - a) / d;
    let h = |t: Q| -> Q {
        let k = lead.partition_point(|p| p.0 <= t);
        if k == 0 {
            lead[0].1
        } else if k == lead.len() {
            lead[k - 1].1
        } else {
            let ((t0, x0), (t1, x1)) = (lead[k - 1], lead[k]);
            x0 + (x1 - x0) * (t - t0) / (t1 - t0)
        }
    };
    let mut cands = vec![ready, lead[lead.len() - 1].0];
    for &(t, x) in lead {
        cands.push(t - (x - a) / w);
    }
    for seg in lead.windows(2) {
        let ((t0, x0), (t1, x1)) = (seg[0], seg[1]);
        for (target, shift) in [(a, Q::zero()), (b, d)] {
            if x0 != x1 && (x0 - target) * (x1 - target) <= Q::zero() {
                cands.push(t0 + (target - x0) * (t1 - t0) / (x1 - x0) - shift);
            }
        }
    }
    cands.retain(|&t| t >= ready);
    cands.sort();
    cands.dedup();
    for tau in cands {
        let idle_ok = h(ready) <= a
            && h(tau) <= a
            && lead.iter().filter(|p| p.0 > ready && p.0 < tau).all(|p| p.1 <= a);
        if !idle_ok {
            return None;
        }
        let end = tau + d;
        let move_ok = h(end) <= b
            && lead.iter().filter(|p| p.0 > tau && p.0 < end).all(|p| p.1 <= a + w * (p.0 - tau));
        if move_ok {
            return Some(tau);
        }
    }
    None
}

/// Runs a route as the yielding reclaimer `who`, never passing `lead`.
fn run_yielding(
    legs: &[Leg],
    start: i64,
    speed: Q,
    who: Reclaimer,
    lead: &ReclaimerPath,
    out: &mut Vec<ReclaimAssignment>,
) -> Option<ReclaimerPath> {
    let sign = if who == Reclaimer::R1 { q(1) } else { q(-1) };
    let lead: Vec<(Q, Q)> = lead.points.iter().map(|&(t, x)| (t, sign * x)).collect();
    let mut b = PathBuilder::new(q(start), speed);
    for leg in legs {
        let (a, to) = (b.pos(), q(leg.to));
        if a == to {
            continue;
        }
        let v = if leg.pile.is_some() { q(1) } else { speed };
        let d = (to - a).abs() / v;
        let tau = earliest_start(&lead, b.time(), sign * a, sign * to, d)?;
        b.wait_until(tau);
        b.push(tau + d, to);
        if let Some((pile, direction)) = leg.pile {
            out.push(ReclaimAssignment { pile, reclaimer: who, t_start: tau, t_end: tau + d, direction });
        }
    }
    Some(b.finish())
}

fn check_choice(inst: &Instance, c: &PairChoice) -> Result<()> {
    let (n1, n) = (inst.n1(), inst.n());
    if c.j > n1 || c.j_prime < n1 || c.j_prime > n || !(1..=2).contains(&c.p) || !(1..=2).contains(&c.q) {
        return Err(Error::Invalid(format!("malformed pair choice {:?} for n1 = {}, n = {}", c, n1, n)));
    }
    Ok(())
}

/// Lower bounds `(F, G)` on the return times of `R0` and `R1` for a pair.
pub fn pair_bounds(inst: &Instance, bf: &BoundaryFunctions, j: usize, j_prime: usize) -> (Q, Q) {
    let n1 = inst.n1();
    let right = |pad: &[crate::model::Stockpile], k: usize| if k == 0 { 0 } else { pad[k - 1].r };
    let left = |pad: &[crate::model::Stockpile], k: usize| pad.get(k).map(|p| p.l).unwrap_or(inst.length);
    let (rj, rjp) = (right(&inst.pad1, j), right(&inst.pad2, j_prime - n1));
    let (lj, ljp) = (left(&inst.pad1, j), left(&inst.pad2, j_prime - n1));
    let s = inst.speed;
    let f = bf.f(0, rj) + q((rj - rjp).abs()) / s + bf.f(1, rjp);
    let g = bf.g(0, lj) + q((lj - ljp).abs()) / s + bf.g(1, ljp);
    (f, g)
}

/// Builds and times the schedule for one choice.
pub fn evaluate_pair(inst: &Instance, choice: PairChoice) -> Result<SolveResult> {
    if inst.precedence.is_some() {
        return Err(Error::Unsupported("unimodal schedules assume a free reclaim order".into()));
    }
    check_choice(inst, &choice)?;
    let legs = routes(inst, &choice);
    let lead = choice.k.other();
    let mut assignments = Vec::new();
    let anchor = |r: Reclaimer| r.anchor(inst.length);
    let lead_path = run_free(&legs[lead.index()], anchor(lead), inst.speed, lead, &mut assignments);
    let follow_path = run_yielding(&legs[choice.k.index()], anchor(choice.k), inst.speed, choice.k, &lead_path, &mut assignments)
        .ok_or_else(|| Error::Infeasible(format!("{:?} cannot yield its way through", choice)))?;
    let paths = if lead == Reclaimer::R0 { [lead_path, follow_path] } else { [follow_path, lead_path] };
    let detail = format!("j={} j'={} p={} q={} k={}", choice.j, choice.j_prime, choice.p, choice.q, choice.k.index());
    Ok(SolveResult::new(Schedule { paths, assignments }, "contiguous-unimodal", detail))
}

fn all_options(j: usize, j_prime: usize) -> impl Iterator<Item = PairChoice> {
    [1u8, 2].into_iter().flat_map(move |p| {
        [1u8, 2].into_iter().flat_map(move |q| {
            [Reclaimer::R0, Reclaimer::R1].into_iter().map(move |k| PairChoice { j, j_prime, p, q, k })
        })
    })
}

/// Best of the eight schedules for one pair; ties keep the first in
/// `(p, q, k)` order.
fn best_for_pair(inst: &Instance, j: usize, j_prime: usize, bound: Option<Q>) -> Option<(Q, PairChoice)> {
    let mut best: Option<(Q, PairChoice)> = None;
    for c in all_options(j, j_prime) {
        let cap = match (&best, bound) {
            (Some((b, _)), _) => Some(*b),
            (None, b) => b,
        };
        if let Ok(r) = evaluate_pair(inst, c) {
            if cap.is_none_or(|b| r.makespan < b) {
                best = Some((r.makespan, c));
            }
        }
    }
    best
}

/// Minimum over every pair `(j, j')`, sentinels included, and all eight
/// routing/yield options.
pub fn best_contiguous_unimodal(inst: &Instance) -> Result<SolveResult> {
    if inst.precedence.is_some() {
        return Err(Error::Unsupported("unimodal schedules assume a free reclaim order".into()));
    }
    let bf = BoundaryFunctions::new(inst);
    let (n1, n) = (inst.n1(), inst.n());
    let mut best: Option<(Q, PairChoice)> = None;
    for j in 0..=n1 {
        for j_prime in n1..=n {
            let (f, g) = pair_bounds(inst, &bf, j, j_prime);
            let lower = std::cmp::max(f, g);
            if best.as_ref().is_some_and(|(b, _)| lower >= *b) {
                continue;
            }
            let cap = best.as_ref().map(|(b, _)| *b);
            if let Some((v, c)) = best_for_pair(inst, j, j_prime, cap) {
                if cap.is_none_or(|b| v < b) {
                    best = Some((v, c));
                }
            }
        }
    }
    let (_, c) = best.ok_or_else(|| Error::Infeasible("no contiguous unimodal schedule".into()))?;
    evaluate_pair(inst, c)
}

/// Assigns whole piles around the preemptive split point and returns the best
/// unimodal schedule for that assignment. Makespan is at most `2 K*`.
pub fn two_approximation(inst: &Instance) -> Result<SolveResult> {
    if inst.precedence.is_some() {
        return Err(Error::Unsupported("the 2-approximation assumes a free reclaim order".into()));
    }
    let (x, _) = split_point(inst);
    let straddles = |p: &crate::model::Stockpile| q(p.l) < x && x < q(p.r);
    let s1 = inst.pad1.iter().find(|p| straddles(p));
    let s2 = inst.pad2.iter().find(|p| straddles(p));
    let (take1, take2) = match (s1, s2) {
        (None, None) => (false, false),
        (Some(p), None) => {
            let left = x - q(p.l) >= q(p.r) - x;
            (left, false)
        }
        (None, Some(p)) => {
            let left = x - q(p.l) >= q(p.r) - x;
            (false, left)
        }
        (Some(a), Some(b)) => {
            let s = inst.speed;
            let lhs = (x - q(a.l)) + (x - q(b.l)) + q((a.l - b.l).abs()) / s;
            let rhs = (q(a.r) - x) + (q(b.r) - x) + q((a.r - b.r).abs()) / s;
            (lhs >= rhs, lhs >= rhs)
        }
    };
    let count = |pad: &[crate::model::Stockpile], straddler: Option<&crate::model::Stockpile>, take: bool| {
        pad.iter().filter(|p| q(p.r) <= x).count() + usize::from(straddler.is_some() && take)
    };
    let j = count(&inst.pad1, s1, take1);
    let j_prime = inst.n1() + count(&inst.pad2, s2, take2);
    let (_, c) = best_for_pair(inst, j, j_prime, None)
        .ok_or_else(|| Error::Infeasible(format!("no schedule for pair ({}, {})", j, j_prime)))?;
    let mut r = evaluate_pair(inst, c)?;
    r.solver = "two-approximation";
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{qr, validate_schedule, Mode};

    fn zigzag() -> Instance {
        Instance::new(12, q(5), &[(0, 2), (2, 12)], &[(0, 10), (10, 12)])
    }

    fn speed_family() -> Instance {
        Instance::new(6, q(18), &[(0, 1), (1, 2), (2, 4), (4, 5), (5, 6)], &[])
    }

    #[test]
    fn boundary_functions_add_up() {
        let inst = zigzag();
        let bf = BoundaryFunctions::new(&inst);
        assert_eq!(bf.f(0, 6), q(6));
        assert_eq!(bf.f(1, 11), q(11));
        assert_eq!(bf.f(0, 1), q(1));
        assert_eq!(BoundaryFunctions::new(&Instance::new(6, q(2), &[(2, 3)], &[])).f(0, 6), qr(7, 2));
        assert_eq!(bf.g(0, 2), q(10));
        assert_eq!(bf.g(1, 12), q(0));
    }

    #[test]
    fn disjoint_halves_do_not_clash() {
        let inst = Instance::new(12, q(2), &[(0, 4)], &[(8, 12)]);
        for c in all_options(1, 1) {
            assert_eq!(evaluate_pair(&inst, c).unwrap().makespan, q(6));
        }
    }

    #[test]
    fn both_full_piles_to_left_reclaimer() {
        let inst = Instance::new(10, q(5), &[(0, 10)], &[(0, 10)]);
        let c = PairChoice { j: 1, j_prime: 2, p: 1, q: 1, k: Reclaimer::R1 };
        assert_eq!(evaluate_pair(&inst, c).unwrap().makespan, q(20));
        assert_eq!(two_approximation(&inst).unwrap().makespan, q(20));
    }

    #[test]
    fn zigzag_values() {
        let inst = zigzag();
        let r = best_contiguous_unimodal(&inst).unwrap();
        assert_eq!(r.makespan, qr(76, 5));
        assert!(validate_schedule(&inst, &r.schedule, Mode::Free).is_empty());
        let a = two_approximation(&inst).unwrap();
        assert_eq!(a.makespan, qr(112, 5));
        assert!(validate_schedule(&inst, &a.schedule, Mode::Free).is_empty());
    }

    #[test]
    fn speed_family_values() {
        let inst = speed_family();
        let r = best_contiguous_unimodal(&inst).unwrap();
        assert_eq!(r.makespan, qr(38, 9));
        assert!(validate_schedule(&inst, &r.schedule, Mode::Free).is_empty());
    }

    #[test]
    fn empty_instance() {
        let inst = Instance::new(5, q(2), &[], &[]);
        assert_eq!(best_contiguous_unimodal(&inst).unwrap().makespan, q(0));
        assert_eq!(two_approximation(&inst).unwrap().makespan, q(0));
    }

    #[test]
    fn malformed_choice() {
        let c = PairChoice { j: 3, j_prime: 2, p: 1, q: 1, k: Reclaimer::R0 };
        assert!(matches!(evaluate_pair(&zigzag(), c), Err(Error::Invalid(_))));
    }
}
