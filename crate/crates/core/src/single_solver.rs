//! Forward-backward sweep: the optimal single-reclaimer schedule when the
//! reclaim order is free.

use crate::model::{q, Direction, Instance, PathBuilder, ReclaimAssignment, Reclaimer, ReclaimerPath, Schedule, SolveResult};
use crate::{Error, Result};

/// `R0` sweeps pad `P1` left to right, then pad `P2` right to left, and
/// returns to 0. `R1` stays parked at `L`.
pub fn forward_backward(inst: &Instance) -> Result<SolveResult> {
    if inst.precedence.is_some() {
        return Err(Error::Unsupported("forward-backward ignores reclaim order; use the precedence DP".into()));
    }
    let mut b = PathBuilder::new(q(0), inst.speed);
    let mut assignments = Vec::with_capacity(inst.n());
    let mut sweep = |b: &mut PathBuilder, id: usize, from: i64, to: i64, direction: Direction| {
        b.travel_to(q(from));
        let t_start = b.time();
        b.reclaim_to(q(to));
        assignments.push(ReclaimAssignment {
            pile: id,
            reclaimer: Reclaimer::R0,
            t_start,
            t_end: b.time(),
            direction,
        });
    };
    for p in &inst.pad1 {
        sweep(&mut b, p.id, p.l, p.r, Direction::LeftToRight);
    }
    for p in inst.pad2.iter().rev() {
        sweep(&mut b, p.id, p.r, p.l, Direction::RightToLeft);
    }
    b.travel_to(q(0));
    let schedule = Schedule {
        paths: [b.finish(), ReclaimerPath::parked(inst.length)],
        assignments,
    };
    Ok(SolveResult::new(schedule, "forward-backward", "R0 alone"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::single_reclaimer_lower_bound;
    use crate::model::{qr, validate_schedule, Mode};

    #[test]
    fn empty_instance() {
        let r = forward_backward(&Instance::new(10, q(2), &[], &[])).unwrap();
        assert_eq!(r.makespan, q(0));
        assert_eq!(r.schedule.paths[0].points, vec![(q(0), q(0))]);
    }

    #[test]
    fn single_pile() {
        let inst = Instance::new(10, q(2), &[(2, 4)], &[]);
        assert_eq!(forward_backward(&inst).unwrap().makespan, q(5));
    }

    #[test]
    fn traced_breakpoints() {
        let inst = Instance::new(6, q(2), &[(0, 2), (4, 6)], &[(1, 3)]);
        let r = forward_backward(&inst).unwrap();
        assert_eq!(r.makespan, q(9));
        let want = vec![
            (q(0), q(0)),
            (q(2), q(2)),
            (q(3), q(4)),
            (q(5), q(6)),
            (qr(13, 2), q(3)),
            (qr(17, 2), q(1)),
            (q(9), q(0)),
        ];
        assert_eq!(r.schedule.paths[0].points, want);
        assert!(validate_schedule(&inst, &r.schedule, Mode::Free).is_empty());
        assert_eq!(r.makespan, single_reclaimer_lower_bound(&inst));
    }

    #[test]
    fn adjacent_piles_share_one_segment() {
        let inst = Instance::new(6, q(3), &[(0, 2), (2, 5)], &[]);
        let r = forward_backward(&inst).unwrap();
        let want = vec![(q(0), q(0)), (q(5), q(5)), (qr(20, 3), q(0))];
        assert_eq!(r.schedule.paths[0].points, want);
        assert_eq!(r.schedule.assignments.len(), 2);
        assert!(validate_schedule(&inst, &r.schedule, Mode::Free).is_empty());
    }

    #[test]
    fn rejects_precedence() {
        let inst = Instance::new(6, q(2), &[(0, 2)], &[]).with_precedence(vec![1]);
        assert!(matches!(forward_backward(&inst), Err(Error::Unsupported(_))));
    }
}
