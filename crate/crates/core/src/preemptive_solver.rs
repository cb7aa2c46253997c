//! Optimal preemptive schedules for two reclaimers.
//!
//! `f(x)` is the return time of `R0` when it clears everything in `[0, x]`
//! going out on pad `P1` and back on pad `P2`; `g(x)` is the mirror quantity for
//! `R1` on `[x, L]`. The split point `x*` balances the two.

use num_traits::Zero;

use crate::bounds::{cover_segments, occupancy_decomposition, preemptive_bounds};
use crate::model::{q, Direction, Instance, PathBuilder, Q, ReclaimAssignment, Reclaimer, Schedule, SolveResult};
use crate::{Error, Result};

/// `f` and `g` tabulated at the sorted distinct pile endpoints plus 0 and `L`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitFunctions {
    pub xs: Vec<Q>,
    pub f: Vec<Q>,
    pub g: Vec<Q>,
}

impl SplitFunctions {
    pub fn new(inst: &Instance) -> Self {
        let segs = cover_segments(inst);
        let s = inst.speed;
        let mut cuts: Vec<i64> = vec![0, inst.length];
        cuts.extend(inst.piles().flat_map(|p| [p.l, p.r]));
        cuts.sort_unstable();
        cuts.dedup();
        let mut f = Vec::with_capacity(cuts.len());
        let mut acc = Q::zero();
        let mut seg = 0;
        for (i, &x) in cuts.iter().enumerate() {
            if i > 0 {
                let a = cuts[i - 1];
                while segs[seg].1 <= a {
                    seg += 1;
                }
                acc += q(x - a) * segs[seg].2.round_trip_rate(s);
            }
            f.push(acc);
        }
        let two_k0 = acc;
        let g = f.iter().map(|&v| two_k0 - v).collect();
        SplitFunctions { xs: cuts.into_iter().map(q).collect(), f, g }
    }

    /// `f(L) / 2`.
    pub fn k0(&self) -> Q {
        self.f.last().copied().unwrap_or_else(Q::zero) / q(2)
    }
}

/// The point where `f(x*) = g(x*) = K0`, with the tabulated functions.
pub fn split_point(inst: &Instance) -> (Q, SplitFunctions) {
    let funcs = SplitFunctions::new(inst);
    let k0 = funcs.k0();
    for k in 1..funcs.xs.len() {
        let (fa, fb) = (funcs.f[k - 1], funcs.f[k]);
        if fa <= k0 && k0 < fb {
            let (xa, xb) = (funcs.xs[k - 1], funcs.xs[k]);
            return (xa + (k0 - fa) / (fb - fa) * (xb - xa), funcs);
        }
    }
    (q(inst.length) / q(2), funcs)
}

/// Clears `[0, reach]`: pad `P1` pieces left to right going out, pad `P2`
/// pieces right to left coming back.
fn left_route(inst: &Instance, reach: Q, out: &mut Vec<ReclaimAssignment>) -> PathBuilder {
    let mut b = PathBuilder::new(q(0), inst.speed);
    let mut sweep = |b: &mut PathBuilder, id, from: Q, to: Q, direction| {
        b.travel_to(from);
        let t_start = b.time();
        b.reclaim_to(to);
        out.push(ReclaimAssignment { pile: id, reclaimer: Reclaimer::R0, t_start, t_end: b.time(), direction });
    };
    for p in inst.pad1.iter().filter(|p| q(p.l) < reach) {
        sweep(&mut b, p.id, q(p.l), std::cmp::min(q(p.r), reach), Direction::LeftToRight);
    }
    b.travel_to(reach);
    for p in inst.pad2.iter().rev().filter(|p| q(p.l) < reach) {
        sweep(&mut b, p.id, std::cmp::min(q(p.r), reach), q(p.l), Direction::RightToLeft);
    }
    b.travel_to(q(0));
    b
}

/// Mirror of [`left_route`] for `R1` on `[reach, L]`.
fn right_route(inst: &Instance, reach: Q, out: &mut Vec<ReclaimAssignment>) -> PathBuilder {
    let mut b = PathBuilder::new(q(inst.length), inst.speed);
    let mut sweep = |b: &mut PathBuilder, id, from: Q, to: Q, direction| {
        b.travel_to(from);
        let t_start = b.time();
        b.reclaim_to(to);
        out.push(ReclaimAssignment { pile: id, reclaimer: Reclaimer::R1, t_start, t_end: b.time(), direction });
    };
    for p in inst.pad1.iter().rev().filter(|p| q(p.r) > reach) {
        sweep(&mut b, p.id, q(p.r), std::cmp::max(q(p.l), reach), Direction::RightToLeft);
    }
    b.travel_to(reach);
    for p in inst.pad2.iter().filter(|p| q(p.r) > reach) {
        sweep(&mut b, p.id, std::cmp::max(q(p.l), reach), q(p.r), Direction::LeftToRight);
    }
    b.travel_to(q(inst.length));
    b
}

/// Optimal preemptive schedule. When `x*` falls in an empty gap the result
/// leaves that gap unvisited and no pile is cut; otherwise both reclaimers
/// turn at `x*` and piles straddling it are cut there.
pub fn preemptive_schedule(inst: &Instance) -> Result<SolveResult> {
    if inst.precedence.is_some() {
        return Err(Error::Unsupported("preemptive bound assumes a free reclaim order".into()));
    }
    let (x_star, _) = split_point(inst);
    let gap = occupancy_decomposition(inst)
        .e
        .into_iter()
        .find(|&(a, b)| q(a) <= x_star && x_star <= q(b));
    let (left_reach, right_reach, detail) = match gap {
        Some((a, b)) => (q(a), q(b), format!("gap [{}, {}] left unvisited", a, b)),
        None => (x_star, x_star, format!("split at x* = {}", x_star)),
    };
    let mut assignments = Vec::new();
    let p0 = left_route(inst, left_reach, &mut assignments).finish();
    let p1 = right_route(inst, right_reach, &mut assignments).finish();
    let cut = gap.is_none() && inst.piles().any(|p| q(p.l) < x_star && x_star < q(p.r));
    let mut res = SolveResult::new(Schedule { paths: [p0, p1], assignments }, "preemptive", detail);
    res.preemptive = cut;
    debug_assert_eq!(res.makespan, preemptive_bounds(inst).k_star);
    Ok(res)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{validate_schedule, Mode};

    fn zigzag() -> Instance {
        Instance::new(12, q(5), &[(0, 2), (2, 12)], &[(0, 10), (10, 12)])
    }

    #[test]
    fn split_points() {
        assert_eq!(split_point(&zigzag()).0, q(6));
        assert_eq!(split_point(&Instance::new(6, q(2), &[(0, 2)], &[(4, 6)])).0, q(3));
        assert_eq!(split_point(&Instance::new(10, q(5), &[(0, 10)], &[(0, 10)])).0, q(5));
        assert_eq!(split_point(&Instance::new(7, q(3), &[], &[])).0, crate::model::qr(7, 2));
    }

    #[test]
    fn functions_sum_to_twice_k0() {
        let (_, f) = split_point(&zigzag());
        for i in 0..f.xs.len() {
            assert_eq!(f.f[i] + f.g[i], q(2) * f.k0());
        }
        assert_eq!(f.f[0], q(0));
        assert_eq!(*f.g.last().unwrap(), q(0));
    }

    #[test]
    fn gap_case_is_not_preemptive() {
        let inst = Instance::new(6, q(2), &[(0, 2)], &[(4, 6)]);
        let r = preemptive_schedule(&inst).unwrap();
        assert_eq!(r.makespan, q(3));
        assert!(!r.preemptive);
        assert!(validate_schedule(&inst, &r.schedule, Mode::Free).is_empty());
    }

    #[test]
    fn zigzag_cuts_two_piles() {
        let inst = zigzag();
        let r = preemptive_schedule(&inst).unwrap();
        assert_eq!(r.makespan, q(12));
        assert!(r.preemptive);
        let mut cut: Vec<usize> = r.schedule.assignments.iter().map(|a| a.pile).collect();
        cut.sort();
        assert_eq!(cut, vec![1, 2, 2, 3, 3, 4]);
        assert!(validate_schedule(&inst, &r.schedule, Mode::Preemptive).is_empty());
        for a in r.schedule.assignments.iter().filter(|a| a.pile == 2 || a.pile == 3) {
            let path = r.schedule.path(a.reclaimer);
            let ends = [path.position(a.t_start).unwrap(), path.position(a.t_end).unwrap()];
            assert!(ends.contains(&q(6)));
        }
    }

    #[test]
    fn empty_instance() {
        let r = preemptive_schedule(&Instance::new(8, q(2), &[], &[])).unwrap();
        assert_eq!(r.makespan, q(0));
    }
}
