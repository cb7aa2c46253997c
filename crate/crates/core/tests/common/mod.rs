#![allow(dead_code)]

use reclaim_core::generators::{gen_random, GenMode, Generated};
use reclaim_core::positioning::LengthsInstance;
use reclaim_core::{qr, Instance, Q};

pub const SPEEDS: [(i64, i64); 5] = [(1, 1), (3, 2), (2, 1), (5, 2), (3, 1)];

pub fn speed(i: usize) -> Q {
    let (n, d) = SPEEDS[i % SPEEDS.len()];
    qr(n, d)
}

pub fn placed(seed: u64, n: usize, length: i64, s: Q, precedence: bool) -> Instance {
    let mode = if precedence { GenMode::Precedence } else { GenMode::Free };
    match gen_random(seed, n, length, s, mode).expect("parameters fit") {
        Generated::Placed(i) => i,
        Generated::Lengths(_) => unreachable!(),
    }
}

pub fn lengths(seed: u64, n: usize, length: i64, s: Q) -> LengthsInstance {
    match gen_random(seed, n, length, s, GenMode::Lengths).expect("parameters fit") {
        Generated::Lengths(l) => l,
        Generated::Placed(_) => unreachable!(),
    }
}

/// Rail length in `lo..=hi` large enough for `n` piles on two pads.
pub fn fit_length(n: usize, pick: i64, lo: i64, hi: i64) -> i64 {
    let min = std::cmp::max(lo, (n as i64 + 1) / 2);
    min + pick.rem_euclid(std::cmp::max(hi - min + 1, 1))
}

use reclaim_core::{ReclaimerPath, Schedule, ViolationKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mutation {
    PerturbBreakpoint,
    DropAssignment,
    CrossPaths,
    ReorderPrecedence,
}

impl Mutation {
    pub const ALL: [Mutation; 4] =
        [Mutation::PerturbBreakpoint, Mutation::DropAssignment, Mutation::CrossPaths, Mutation::ReorderPrecedence];

    pub fn expected(self) -> ViolationKind {
        match self {
            Mutation::PerturbBreakpoint => ViolationKind::Slope,
            Mutation::DropAssignment => ViolationKind::Uncovered,
            Mutation::CrossPaths => ViolationKind::NoPass,
            Mutation::ReorderPrecedence => ViolationKind::Order,
        }
    }
}

/// Applies `m` using `pick` to choose the spot; `None` when the schedule has
/// nothing to mutate in that way.
pub fn mutate(inst: &Instance, sched: &Schedule, m: Mutation, pick: usize) -> Option<(Instance, Schedule)> {
    let (mut inst, mut sched) = (inst.clone(), sched.clone());
    match m {
        Mutation::PerturbBreakpoint => {
            let movable: Vec<(usize, usize)> = (0..2)
                .flat_map(|k| (1..sched.paths[k].points.len()).map(move |i| (k, i)))
                .collect();
            let &(k, i) = movable.get(pick % movable.len().max(1))?;
            let delta = qr(1, 7919);
            let x = sched.paths[k].points[i].1;
            let x = if x + delta <= Q::from_integer(inst.length) { x + delta } else { x - delta };
            sched.paths[k].points[i].1 = x;
        }
        Mutation::DropAssignment => {
            if sched.assignments.is_empty() {
                return None;
            }
            sched.assignments.remove(pick % sched.assignments.len());
        }
        Mutation::CrossPaths => {
            if inst.length == 0 {
                return None;
            }
            // Both sweep the whole rail toward each other and pass mid-rail.
            let (zero, l) = (Q::from_integer(0), Q::from_integer(inst.length));
            let t = l / inst.speed;
            sched.paths[0] = ReclaimerPath::new(vec![(zero, zero), (t, l), (t + t, zero)]);
            sched.paths[1] = ReclaimerPath::new(vec![(zero, l), (t, zero), (t + t, l)]);
        }
        Mutation::ReorderPrecedence => {
            let chain = inst.precedence.as_mut()?;
            if chain.len() < 2 {
                return None;
            }
            let i = pick % (chain.len() - 1);
            chain.swap(i, i + 1);
        }
    }
    Some((inst, sched))
}
