//! Brute-force exact solvers for small instances. They share the validator and
//! the lower bounds with the rest of the crate but none of the solver code, so
//! tests can pit the two against each other.

use num_traits::{Signed, Zero};

use crate::bounds::preemptive_bounds;
use crate::model::{q, validate_schedule, Direction, Instance, Mode, PathBuilder, Q, ReclaimAssignment, Reclaimer, ReclaimerPath, Schedule, SolveResult};
use crate::positioning::{positioning_lower_bound, LengthsInstance};
use crate::{Error, Result};

/// Caps checked before and during a search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchBudget {
    pub max_piles: usize,
    /// Largest number of grid units along the rail (after rational scaling).
    pub max_grid: i64,
    pub max_nodes: u64,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget { max_piles: 8, max_grid: 64, max_nodes: 20_000_000 }
    }
}

struct Nodes {
    used: u64,
    cap: u64,
}

impl Nodes {
    fn tick(&mut self) -> Result<()> {
        self.used += 1;
        if self.used > self.cap {
            return Err(Error::Resource(format!("search exceeded {} nodes", self.cap)));
        }
        Ok(())
    }
}

fn check_piles(n: usize, budget: &SearchBudget) -> Result<()> {
    if n > budget.max_piles || n >= 32 {
        return Err(Error::Resource(format!("{} piles, oracle cap is {}", n, budget.max_piles)));
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Free order, two reclaimers.

fn at(points: &[(Q, Q)], t: Q) -> Q {
    match points.iter().position(|p| p.0 > t) {
        None => points[points.len() - 1].1,
        Some(0) => points[0].1,
        Some(k) => {
            let ((t0, x0), (t1, x1)) = (points[k - 1], points[k]);
            x0 + (x1 - x0) * (t - t0) / (t1 - t0)
        }
    }
}

/// Whether the straight move `(t0, y0) -> (t1, y1)` stays on the `side` of
/// `lead` (`+1` above, `-1` below).
fn keeps_side(lead: &[(Q, Q)], (t0, y0): (Q, Q), (t1, y1): (Q, Q), side: Q) -> bool {
    let ok = |t: Q, y: Q| side * (y - at(lead, t)) >= Q::zero();
    if !ok(t0, y0) || !ok(t1, y1) {
        return false;
    }
    lead.iter().filter(|p| p.0 > t0 && p.0 < t1).all(|&(t, _)| ok(t, y0 + (y1 - y0) * (t - t0) / (t1 - t0)))
}

/// Earliest departure `tau >= ready` for a straight move from `a` to `b`
/// lasting `d`, idling at `a` until then.
fn depart(lead: &[(Q, Q)], ready: Q, a: Q, b: Q, d: Q, side: Q) -> Option<Q> {
    let w = (b - a) / d;
    let mut cand = vec![ready, lead[lead.len() - 1].0];
    cand.extend(lead.iter().map(|&(t, x)| t - (x - a) / w));
    for pair in lead.windows(2) {
        let ((t0, x0), (t1, x1)) = (pair[0], pair[1]);
        if x0 == x1 {
            continue;
        }
        for (y, back) in [(a, Q::zero()), (b, d)] {
            let u = t0 + (y - x0) * (t1 - t0) / (x1 - x0);
            if t0 <= u && u <= t1 {
                cand.push(u - back);
            }
        }
    }
    cand.retain(|&t| t >= ready);
    cand.sort();
    cand.dedup();
    for tau in cand {
        if !keeps_side(lead, (ready, a), (tau, a), side) {
            return None;
        }
        if keeps_side(lead, (tau, a), (tau + d, b), side) {
            return Some(tau);
        }
    }
    None
}

#[derive(Debug, Clone, Copy)]
struct Job {
    id: usize,
    l: i64,
    r: i64,
}

struct Best {
    value: Q,
    paths: [Vec<(Q, Q)>; 2],
    assignments: Vec<ReclaimAssignment>,
}

/// Depth-first search over eager schedules. One reclaimer leads and never
/// waits; the other follows its own job order and idles only when its next
/// straight move would meet the leader.
struct FreeSearch {
    jobs: Vec<Job>,
    length: i64,
    s: Q,
    nodes: Nodes,
    floor: Q,
    best: Option<Best>,
}

impl FreeSearch {
    fn better(&self, v: Q) -> bool {
        self.best.as_ref().is_none_or(|b| v < b.value)
    }

    fn done(&self) -> bool {
        self.best.as_ref().is_some_and(|b| b.value <= self.floor)
    }

    fn anchor(&self, who: Reclaimer) -> Q {
        q(who.anchor(self.length))
    }

    fn bits(&self, mask: u32) -> impl Iterator<Item = usize> + '_ {
        (0..self.jobs.len()).filter(move |i| mask >> i & 1 == 1)
    }

    /// Lower bound on when `who`, at `(t, x)`, can finish the piles in `mask`
    /// and get home.
    fn finish_bound(&self, who: Reclaimer, mask: u32, t: Q, x: Q) -> Q {
        let home = self.anchor(who);
        if mask == 0 {
            return t + (x - home).abs() / self.s;
        }
        let work: i64 = self.bits(mask).map(|i| self.jobs[i].r - self.jobs[i].l).sum();
        let dist = if who == Reclaimer::R0 {
            let far = q(self.bits(mask).map(|i| self.jobs[i].r).max().unwrap_or(0));
            (x - far).abs() + far
        } else {
            let far = q(self.bits(mask).map(|i| self.jobs[i].l).min().unwrap_or(0));
            (x - far).abs() + (home - far)
        };
        let idle = std::cmp::max(Q::zero(), dist - q(work));
        t + q(work) + idle / self.s
    }

    fn lead(&mut self, who: Reclaimer, pts: &mut Vec<(Q, Q)>, asg: &mut Vec<ReclaimAssignment>, taken: u32, allowed: u32, take_all: bool) -> Result<()> {
        self.nodes.tick()?;
        if self.done() {
            return Ok(());
        }
        let (t, x) = pts[pts.len() - 1];
        let home = self.anchor(who);
        let full = (1u32 << self.jobs.len()) - 1;
        if !take_all || taken == allowed {
            let back = t + (x - home).abs() / self.s;
            let rest = if take_all { full & !allowed } else { full & !taken };
            let other = who.other();
            let start = self.anchor(other);
            if self.better(std::cmp::max(back, self.finish_bound(other, rest, q(0), start))) {
                let mut path = pts.clone();
                if back > t {
                    path.push((back, home));
                }
                let mut fpts = vec![(q(0), start)];
                let mut fasg = asg.clone();
                self.follow(other, &path, back, &mut fpts, &mut fasg, rest)?;
            }
        }
        for i in self.bits(allowed & !taken).collect::<Vec<_>>() {
            let job = self.jobs[i];
            for dir in [Direction::LeftToRight, Direction::RightToLeft] {
                let (from, to) = if dir == Direction::LeftToRight { (q(job.l), q(job.r)) } else { (q(job.r), q(job.l)) };
                let t1 = t + (x - from).abs() / self.s;
                let t2 = t1 + (to - from).abs();
                if !self.better(t2 + (to - home).abs() / self.s) {
                    continue;
                }
                let mark = pts.len();
                if t1 > t {
                    pts.push((t1, from));
                }
                pts.push((t2, to));
                asg.push(ReclaimAssignment { pile: job.id, reclaimer: who, t_start: t1, t_end: t2, direction: dir });
                self.lead(who, pts, asg, taken | 1 << i, allowed, take_all)?;
                asg.pop();
                pts.truncate(mark);
            }
        }
        Ok(())
    }

    #[allow(clippy::too_many_arguments)]
    fn follow(&mut self, who: Reclaimer, lead: &[(Q, Q)], lead_end: Q, pts: &mut Vec<(Q, Q)>, asg: &mut Vec<ReclaimAssignment>, mask: u32) -> Result<()> {
        self.nodes.tick()?;
        if self.done() {
            return Ok(());
        }
        let side = if who == Reclaimer::R1 { q(1) } else { q(-1) };
        let (t, x) = pts[pts.len() - 1];
        if !self.better(std::cmp::max(lead_end, self.finish_bound(who, mask, t, x))) {
            return Ok(());
        }
        if mask == 0 {
            let home = self.anchor(who);
            let mark = pts.len();
            let mut end = t;
            if x != home {
                let d = (x - home).abs() / self.s;
                let Some(tau) = depart(lead, t, x, home, d, side) else { return Ok(()) };
                if tau > t {
                    pts.push((tau, x));
                }
                end = tau + d;
                pts.push((end, home));
            }
            let value = std::cmp::max(lead_end, end);
            if self.better(value) {
                let mut paths = [lead.to_vec(), pts.clone()];
                if who == Reclaimer::R0 {
                    paths.swap(0, 1);
                }
                self.best = Some(Best { value, paths, assignments: asg.clone() });
            }
            pts.truncate(mark);
            return Ok(());
        }
        for i in self.bits(mask).collect::<Vec<_>>() {
            let job = self.jobs[i];
            for dir in [Direction::LeftToRight, Direction::RightToLeft] {
                let (from, to) = if dir == Direction::LeftToRight { (q(job.l), q(job.r)) } else { (q(job.r), q(job.l)) };
                let mark = pts.len();
                let mut now = t;
                if x != from {
                    let d = (x - from).abs() / self.s;
                    let Some(tau) = depart(lead, now, x, from, d, side) else { continue };
                    if tau > now {
                        pts.push((tau, x));
                    }
                    now = tau + d;
                    pts.push((now, from));
                }
                let len = (to - from).abs();
                let Some(tau) = depart(lead, now, from, to, len, side) else {
                    pts.truncate(mark);
                    continue;
                };
                if tau > now {
                    pts.push((tau, from));
                }
                pts.push((tau + len, to));
                asg.push(ReclaimAssignment { pile: job.id, reclaimer: who, t_start: tau, t_end: tau + len, direction: dir });
                self.follow(who, lead, lead_end, pts, asg, mask & !(1 << i))?;
                asg.pop();
                pts.truncate(mark);
            }
        }
        Ok(())
    }
}

fn tidy(points: &[(Q, Q)], s: Q) -> ReclaimerPath {
    let mut b = PathBuilder::starting_at(points[0].0, points[0].1, s);
    for &(t, x) in &points[1..] {
        b.push(t, x);
    }
    b.finish()
}

fn free_search(inst: &Instance, budget: &SearchBudget, r0: Option<&[usize]>) -> Result<SolveResult> {
    if inst.precedence.is_some() {
        return Err(Error::Unsupported("the free-order oracle ignores precedence".into()));
    }
    check_piles(inst.n(), budget)?;
    let jobs: Vec<Job> = inst.piles().map(|p| Job { id: p.id, l: p.l, r: p.r }).collect();
    let n = jobs.len();
    let full = if n == 0 { 0 } else { (1u32 << n) - 1 };
    let r0_mask = match r0 {
        None => None,
        Some(ids) => {
            let mut m = 0u32;
            for &id in ids {
                let i = jobs.iter().position(|j| j.id == id).ok_or_else(|| Error::Invalid(format!("unknown pile {}", id)))?;
                m |= 1 << i;
            }
            Some(m)
        }
    };
    let mut search = FreeSearch {
        jobs,
        length: inst.length,
        s: inst.speed,
        nodes: Nodes { used: 0, cap: budget.max_nodes },
        floor: preemptive_bounds(inst).k_star,
        best: None,
    };
    for leader in [Reclaimer::R1, Reclaimer::R0] {
        let (allowed, take_all) = match r0_mask {
            None => (full, false),
            Some(m) if leader == Reclaimer::R0 => (m, true),
            Some(m) => (full & !m, true),
        };
        let mut pts = vec![(q(0), search.anchor(leader))];
        search.lead(leader, &mut pts, &mut Vec::new(), 0, allowed, take_all)?;
    }
    let best = search.best.ok_or_else(|| Error::Infeasible("no eager schedule found".into()))?;
    let schedule = Schedule { paths: [tidy(&best.paths[0], inst.speed), tidy(&best.paths[1], inst.speed)], assignments: best.assignments };
    if let Some(v) = validate_schedule(inst, &schedule, Mode::Free).first() {
        return Err(Error::Infeasible(format!("oracle built an invalid schedule: {}", v.message)));
    }
    let res = SolveResult::new(schedule, "oracle-two-free", format!("{} nodes", search.nodes.used));
    debug_assert_eq!(res.makespan, best.value);
    Ok(res)
}

/// Exact minimum over eager two-reclaimer schedules.
pub fn oracle_two_free(inst: &Instance, budget: &SearchBudget) -> Result<SolveResult> {
    free_search(inst, budget, None)
}

/// As [`oracle_two_free`], with `R0` reclaiming exactly the piles `r0` and
/// `R1` the rest.
pub fn oracle_two_free_assigned(inst: &Instance, budget: &SearchBudget, r0: &[usize]) -> Result<SolveResult> {
    free_search(inst, budget, Some(r0))
}

// ---------------------------------------------------------------------------
// Precedence chains.

fn chain_spans(inst: &Instance) -> Result<Vec<(i64, i64)>> {
    let chain = inst.precedence.as_ref().ok_or_else(|| Error::Unsupported("a precedence chain is required".into()))?;
    chain
        .iter()
        .map(|&id| inst.pile(id).map(|p| (p.l, p.r)).ok_or_else(|| Error::Invalid(format!("unknown pile {}", id))))
        .collect()
}

/// Tries every direction vector for one reclaimer following the chain.
pub fn oracle_single_prec_directions(inst: &Instance) -> Result<Q> {
    let spans = chain_spans(inst)?;
    let n = spans.len();
    if n > 20 {
        return Err(Error::Resource(format!("{} piles, direction enumeration stops at 20", n)));
    }
    let s = inst.speed;
    let mut best: Option<Q> = None;
    for bits in 0u32..1 << n {
        let (mut t, mut x) = (Q::zero(), 0i64);
        for (i, &(l, r)) in spans.iter().enumerate() {
            let (from, to) = if bits >> i & 1 == 0 { (l, r) } else { (r, l) };
            t += q((x - from).abs()) / s + q(r - l);
            x = to;
        }
        t += q(x) / s;
        if best.is_none_or(|b| t < b) {
            best = Some(t);
        }
    }
    Ok(best.unwrap_or_else(Q::zero))
}

struct PrecSearch {
    spans: Vec<(i64, i64)>,
    grid: i64,
    a: i64,
    b: i64,
    nodes: Nodes,
}

impl PrecSearch {
    fn value(&mut self, j: usize, x0: i64, x1: i64) -> Result<Q> {
        self.nodes.tick()?;
        if j == self.spans.len() {
            return Ok(Q::new(std::cmp::max(x0, self.grid - x1), self.a));
        }
        let (l, r) = self.spans[j];
        let mut best: Option<Q> = None;
        for mover in 0..2 {
            for (from, to) in [(l, r), (r, l)] {
                let here = if mover == 0 { x0 } else { x1 };
                let t = Q::new((here - from).abs(), self.a) + Q::new(r - l, self.b);
                let reach = (t * q(self.a)).to_integer();
                let (lo, hi) = if mover == 0 {
                    (std::cmp::max(to, x1 - reach), std::cmp::min(self.grid, x1 + reach))
                } else {
                    (std::cmp::max(0, x0 - reach), std::cmp::min(to, x0 + reach))
                };
                for y in lo..=hi {
                    let rest = if mover == 0 { self.value(j + 1, to, y)? } else { self.value(j + 1, y, to)? };
                    if best.is_none_or(|b| t + rest < b) {
                        best = Some(t + rest);
                    }
                }
            }
        }
        Ok(best.expect("the idle reclaimer can always stay where it is"))
    }
}

/// Expands every stage choice of the two-reclaimer chain problem, without
/// memoisation.
pub fn oracle_two_prec(inst: &Instance, budget: &SearchBudget) -> Result<Q> {
    let spans = chain_spans(inst)?;
    check_piles(spans.len(), budget)?;
    let (a, b) = (*inst.speed.numer(), *inst.speed.denom());
    let grid = inst.length * b;
    if grid > budget.max_grid {
        return Err(Error::Resource(format!("grid of {} points, cap is {}", grid, budget.max_grid)));
    }
    let spans = spans.into_iter().map(|(l, r)| (l * b, r * b)).collect();
    let mut search = PrecSearch { spans, grid, a, b, nodes: Nodes { used: 0, cap: budget.max_nodes } };
    search.value(0, 0, grid)
}

// ---------------------------------------------------------------------------
// Positioning, one reclaimer.

struct PlaceSearch {
    lengths: Vec<i64>,
    rail: i64,
    s: Q,
    nodes: Nodes,
    floor: Q,
    best: Option<Q>,
    placed: [Vec<(i64, i64)>; 2],
}

impl PlaceSearch {
    /// `ends` holds the best times to have finished the previous pile at its
    /// left and its right end, with those positions.
    fn place(&mut self, i: usize, ends: [(Q, i64); 2]) -> Result<()> {
        self.nodes.tick()?;
        if self.best.is_some_and(|b| b <= self.floor) {
            return Ok(());
        }
        let rest: i64 = self.lengths[i..].iter().sum();
        let soonest = std::cmp::min(ends[0].0, ends[1].0) + q(rest);
        if self.best.is_some_and(|b| soonest >= b) {
            return Ok(());
        }
        if i == self.lengths.len() {
            let done = ends.iter().map(|&(t, x)| t + q(x) / self.s).min().unwrap();
            if self.best.is_none_or(|b| done < b) {
                self.best = Some(done);
            }
            return Ok(());
        }
        let p = self.lengths[i];
        for pad in 0..2 {
            for l in 0..=self.rail - p {
                let r = l + p;
                if self.placed[pad].iter().any(|&(a, b)| a < r && l < b) {
                    continue;
                }
                let reach = |x: i64| ends.iter().map(|&(t, y)| t + q((y - x).abs()) / self.s).min().unwrap();
                let next = [(reach(r) + q(p), l), (reach(l) + q(p), r)];
                self.placed[pad].push((l, r));
                self.place(i + 1, next)?;
                self.placed[pad].pop();
            }
        }
        Ok(())
    }
}

/// Best placement of the lengths for one reclaimer reclaiming them in order.
pub fn oracle_positioning_single(inst: &LengthsInstance, budget: &SearchBudget) -> Result<Q> {
    check_piles(inst.lengths.len(), budget)?;
    if inst.length > budget.max_grid {
        return Err(Error::Resource(format!("rail of {} units, cap is {}", inst.length, budget.max_grid)));
    }
    let mut search = PlaceSearch {
        lengths: inst.lengths.clone(),
        rail: inst.length,
        s: inst.speed,
        nodes: Nodes { used: 0, cap: budget.max_nodes },
        floor: positioning_lower_bound(inst),
        best: None,
        placed: [Vec::new(), Vec::new()],
    };
    search.place(0, [(Q::zero(), 0), (Q::zero(), 0)])?;
    search.best.ok_or_else(|| Error::Infeasible("the piles do not fit on the rail".into()))
}
