use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use super::{q, Direction, Instance, Pad, Q, Reclaimer, ReclaimerPath, Schedule, Stockpile};

/// Which schedule rules apply.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// Any reclaim order, one full sweep per pile.
    Free,
    /// Piles reclaimed in the instance's chain order, no overlap in time.
    Precedence,
    /// Piles may be cut into pieces handled by different sweeps.
    Preemptive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ViolationKind {
    // instance
    Overlap,
    Degenerate,
    OutOfRange,
    SlowTravel,
    BadPrecedence,
    Numbering,
    // schedule geometry
    EmptyPath,
    TimeOrder,
    Slope,
    Anchor,
    PathRange,
    NoPass,
    // coverage
    Uncovered,
    Duplicate,
    UnknownPile,
    BadSweep,
    TimeOverlap,
    Order,
}

impl ViolationKind {
    pub fn label(self) -> &'static str {
        match self {
            ViolationKind::Overlap => "overlap",
            ViolationKind::Degenerate => "l < r required",
            ViolationKind::OutOfRange => "out of range",
            ViolationKind::SlowTravel => "speed below 1",
            ViolationKind::BadPrecedence => "bad precedence",
            ViolationKind::Numbering => "bad numbering",
            ViolationKind::EmptyPath => "empty path",
            ViolationKind::TimeOrder => "non-increasing time",
            ViolationKind::Slope => "bad slope",
            ViolationKind::Anchor => "anchoring",
            ViolationKind::PathRange => "path leaves pad",
            ViolationKind::NoPass => "no-pass",
            ViolationKind::Uncovered => "uncovered stockpile",
            ViolationKind::Duplicate => "duplicate assignment",
            ViolationKind::UnknownPile => "unknown stockpile",
            ViolationKind::BadSweep => "bad sweep",
            ViolationKind::TimeOverlap => "overlapping reclaims",
            ViolationKind::Order => "precedence order",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub kind: ViolationKind,
    pub message: String,
}

impl Violation {
    fn new(kind: ViolationKind, message: impl Into<String>) -> Self {
        Violation { kind, message: message.into() }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.kind.label(), self.message)
    }
}

/// Structural checks on an instance. Empty result means valid.
pub fn validate_instance(inst: &Instance) -> Vec<Violation> {
    use ViolationKind::*;
    let mut out = Vec::new();
    if inst.length < 0 {
        out.push(Violation::new(OutOfRange, format!("pad length {} is negative", inst.length)));
    }
    if inst.speed < Q::one() {
        out.push(Violation::new(SlowTravel, format!("travel speed {} < 1", inst.speed)));
    }
    let n1 = inst.n1();
    for (pad, piles, offset) in [(Pad::P1, &inst.pad1, 0), (Pad::P2, &inst.pad2, n1)] {
        for (i, p) in piles.iter().enumerate() {
            if p.id != offset + i + 1 || p.pad != pad {
                out.push(Violation::new(
                    Numbering,
                    format!("pile at slot {} of {} has id {} on {}", i, pad, p.id, p.pad),
                ));
            }
            if p.l >= p.r {
                out.push(Violation::new(Degenerate, format!("pile {} is [{}, {}]", p.id, p.l, p.r)));
            }
            if p.l < 0 || p.r > inst.length {
                out.push(Violation::new(
                    OutOfRange,
                    format!("pile {} [{}, {}] outside [0, {}]", p.id, p.l, p.r, inst.length),
                ));
            }
        }
        for w in piles.windows(2) {
            if w[0].r > w[1].l {
                out.push(Violation::new(
                    Overlap,
                    format!("overlap on {}: piles {} and {}", pad, w[0].id, w[1].id),
                ));
            }
        }
    }
    if let Some(chain) = &inst.precedence {
        let n = inst.n();
        let mut seen = vec![false; n + 1];
        let mut ok = chain.len() == n;
        for &id in chain {
            if id == 0 || id > n || seen[id] {
                ok = false;
            } else {
                seen[id] = true;
            }
        }
        if !ok {
            out.push(Violation::new(
                BadPrecedence,
                format!("precedence {:?} is not a permutation of 1..={}", chain, n),
            ));
        }
    }
    out
}

/// Feasibility of a schedule for an instance. Empty result means feasible.
pub fn validate_schedule(inst: &Instance, sched: &Schedule, mode: Mode) -> Vec<Violation> {
    let mut out = Vec::new();
    let mut paths_ok = true;
    for r in [Reclaimer::R0, Reclaimer::R1] {
        paths_ok &= check_path(inst, sched.path(r), r, &mut out);
    }
    if paths_ok {
        check_no_pass(sched, &mut out);
        check_coverage(inst, sched, mode, &mut out);
        if mode == Mode::Precedence {
            check_order(inst, sched, &mut out);
        }
    }
    out
}

fn check_path(inst: &Instance, path: &ReclaimerPath, r: Reclaimer, out: &mut Vec<Violation>) -> bool {
    use ViolationKind::*;
    let name = format!("{:?}", r);
    let pts = &path.points;
    if pts.is_empty() {
        out.push(Violation::new(EmptyPath, format!("{} has no breakpoints", name)));
        return false;
    }
    let before = out.len();
    let anchor = q(r.anchor(inst.length));
    if pts[0] != (Q::zero(), anchor) {
        out.push(Violation::new(
            Anchor,
            format!("{} starts at ({}, {}) instead of (0, {})", name, pts[0].0, pts[0].1, anchor),
        ));
    }
    if pts[pts.len() - 1].1 != anchor {
        out.push(Violation::new(Anchor, format!("{} ends at {} instead of {}", name, path.end_pos(), anchor)));
    }
    for (i, &(_, x)) in pts.iter().enumerate() {
        if x < Q::zero() || x > q(inst.length) {
            out.push(Violation::new(PathRange, format!("{} breakpoint {} at x = {}", name, i, x)));
        }
    }
    let s = inst.speed;
    for (i, (t0, x0, t1, x1)) in path.segments().enumerate() {
        if t1 <= t0 {
            out.push(Violation::new(TimeOrder, format!("{} segment {} has t {} -> {}", name, i, t0, t1)));
            continue;
        }
        let v = (x1 - x0) / (t1 - t0);
        let allowed = [Q::zero(), Q::one(), -Q::one(), s, -s];
        if !allowed.contains(&v) {
            out.push(Violation::new(Slope, format!("{} segment {} has slope {}", name, i, v)));
        }
    }
    out.len() == before
}

fn check_no_pass(sched: &Schedule, out: &mut Vec<Violation>) {
    let (a, b) = (&sched.paths[0], &sched.paths[1]);
    let mut times: Vec<Q> = a.points.iter().chain(b.points.iter()).map(|p| p.0).collect();
    times.sort();
    times.dedup();
    for t in times {
        let (x0, x1) = (a.position_clamped(t), b.position_clamped(t));
        if x1 < x0 {
            out.push(Violation::new(
                ViolationKind::NoPass,
                format!("at t = {}: R1 at {} is left of R0 at {}", t, x1, x0),
            ));
            return;
        }
    }
}

/// Checks one reclaim window; returns the positions at its ends.
fn sweep_ends(path: &ReclaimerPath, t0: Q, t1: Q, dir: Direction) -> Result<(Q, Q), String> {
    if !(t0 < t1) || t0 < Q::zero() || t1 > path.end_time() {
        return Err(format!("window [{}, {}] outside path domain [0, {}]", t0, t1, path.end_time()));
    }
    let slope = q(dir.slope());
    for (a, xa, b, xb) in path.segments() {
        if a < t1 && b > t0 && (xb - xa) != slope * (b - a) {
            return Err(format!("path is not a single {:?} sweep on [{}, {}]", dir, t0, t1));
        }
    }
    Ok((path.position_clamped(t0), path.position_clamped(t1)))
}

fn check_coverage(inst: &Instance, sched: &Schedule, mode: Mode, out: &mut Vec<Violation>) {
    use ViolationKind::*;
    let mut count: BTreeMap<usize, usize> = BTreeMap::new();
    let mut pieces: BTreeMap<usize, Vec<(Q, Q)>> = BTreeMap::new();
    for a in &sched.assignments {
        let Some(pile) = inst.pile(a.pile) else {
            out.push(Violation::new(UnknownPile, format!("assignment names pile {}", a.pile)));
            continue;
        };
        *count.entry(pile.id).or_default() += 1;
        match sweep_ends(sched.path(a.reclaimer), a.t_start, a.t_end, a.direction) {
            Err(msg) => out.push(Violation::new(BadSweep, format!("pile {}: {}", a.pile, msg))),
            Ok((xs, xe)) => {
                let (lo, hi) = if xs < xe { (xs, xe) } else { (xe, xs) };
                if mode == Mode::Preemptive {
                    if lo < q(pile.l) || hi > q(pile.r) {
                        out.push(Violation::new(
                            BadSweep,
                            format!("pile {}: piece [{}, {}] outside [{}, {}]", pile.id, lo, hi, pile.l, pile.r),
                        ));
                    }
                } else if (xs, xe) != full_sweep(pile, a.direction) {
                    out.push(Violation::new(
                        BadSweep,
                        format!("pile {}: sweep {} -> {} does not span [{}, {}]", pile.id, xs, xe, pile.l, pile.r),
                    ));
                }
                pieces.entry(pile.id).or_default().push((lo, hi));
            }
        }
    }
    for pile in inst.piles() {
        let c = count.get(&pile.id).copied().unwrap_or(0);
        if c == 0 {
            out.push(Violation::new(Uncovered, format!("uncovered stockpile {}", pile.id)));
        } else if mode != Mode::Preemptive {
            if c > 1 {
                out.push(Violation::new(Duplicate, format!("pile {} assigned {} times", pile.id, c)));
            }
        } else if let Some(v) = pieces.get_mut(&pile.id).filter(|v| v.len() == c) {
            v.sort();
            let mut cursor = q(pile.l);
            let mut ok = true;
            for &(lo, hi) in v.iter() {
                ok &= lo == cursor;
                cursor = hi;
            }
            if !(ok && cursor == q(pile.r)) {
                out.push(Violation::new(
                    Uncovered,
                    format!("pieces of pile {} do not partition [{}, {}]", pile.id, pile.l, pile.r),
                ));
            }
        }
    }
    for r in [Reclaimer::R0, Reclaimer::R1] {
        let mut w: Vec<(Q, Q, usize)> = sched
            .assignments
            .iter()
            .filter(|a| a.reclaimer == r)
            .map(|a| (a.t_start, a.t_end, a.pile))
            .collect();
        w.sort();
        for p in w.windows(2) {
            if p[0].1 > p[1].0 {
                out.push(Violation::new(
                    TimeOverlap,
                    format!("{:?} reclaims piles {} and {} at once", r, p[0].2, p[1].2),
                ));
            }
        }
    }
}

fn full_sweep(p: &Stockpile, dir: Direction) -> (Q, Q) {
    match dir {
        Direction::LeftToRight => (q(p.l), q(p.r)),
        Direction::RightToLeft => (q(p.r), q(p.l)),
    }
}

fn check_order(inst: &Instance, sched: &Schedule, out: &mut Vec<Violation>) {
    let Some(chain) = &inst.precedence else {
        out.push(Violation::new(ViolationKind::Order, "precedence mode without a chain"));
        return;
    };
    let mut window: BTreeMap<usize, (Q, Q)> = BTreeMap::new();
    for a in &sched.assignments {
        window.insert(a.pile, (a.t_start, a.t_end));
    }
    for w in chain.windows(2) {
        if let (Some(a), Some(b)) = (window.get(&w[0]), window.get(&w[1])) {
            if a.1 > b.0 {
                out.push(Violation::new(
                    ViolationKind::Order,
                    format!("pile {} ends at {} after pile {} starts at {}", w[0], a.1, w[1], b.0),
                ));
            }
        }
    }
}
