//! JSON exchange formats. Rationals travel as `"num/den"` strings; plain
//! integers (as numbers or strings) are accepted on input.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::{Direction, Instance, Q, ReclaimAssignment, Reclaimer, ReclaimerPath, Schedule, SolveResult};
use crate::Error;

pub fn format_q(x: Q) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

/// Decimal rendering with `places` digits, rounding half to even.
pub fn format_q_decimal(x: Q, places: u32) -> String {
    let scale = 10i128.pow(places);
    let (n, d) = (*x.numer() as i128 * scale, *x.denom() as i128);
    let (mut quot, rem) = (n.div_euclid(d), n.rem_euclid(d));
    if 2 * rem > d || (2 * rem == d && quot % 2 != 0) {
        quot += 1;
    }
    let sign = if quot < 0 { "-" } else { "" };
    let a = quot.unsigned_abs();
    let s = scale as u128;
    if places == 0 {
        format!("{}{}", sign, a)
    } else {
        format!("{}{}.{:0width$}", sign, a / s, a % s, width = places as usize)
    }
}

pub fn parse_q(s: &str) -> Result<Q, Error> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: {:?}", s));
    match s.split_once('/') {
        Some((a, b)) => {
            let n: i64 = a.trim().parse().map_err(|_| bad())?;
            let d: i64 = b.trim().parse().map_err(|_| bad())?;
            if d == 0 {
                return Err(bad());
            }
            Ok(Q::new(n, d))
        }
        None => Ok(Q::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

fn value_q(v: &Value) -> Result<Q, Error> {
    match v {
        Value::String(s) => parse_q(s),
        Value::Number(n) => n
            .as_i64()
            .map(Q::from_integer)
            .ok_or_else(|| Error::Parse(format!("non-integer number {}", n))),
        other => Err(Error::Parse(format!("expected rational, got {}", other))),
    }
}

#[derive(Serialize, Deserialize)]
struct PileJson {
    l: i64,
    r: i64,
}

#[derive(Serialize, Deserialize)]
struct InstanceJson {
    #[serde(rename = "L")]
    length: i64,
    s: Value,
    pads: [Vec<PileJson>; 2],
    #[serde(default)]
    precedence: Option<Vec<usize>>,
}

#[derive(Serialize, Deserialize)]
struct AssignmentJson {
    pile: usize,
    reclaimer: u8,
    t0: Value,
    t1: Value,
    dir: String,
}

#[derive(Serialize, Deserialize)]
struct ScheduleJson {
    paths: Vec<Vec<[Value; 2]>>,
    assignments: Vec<AssignmentJson>,
}

#[derive(Serialize, Deserialize)]
struct LengthsJson {
    #[serde(rename = "L")]
    length: i64,
    s: Value,
    lengths: Vec<i64>,
}

fn qv(x: Q) -> Value {
    Value::String(format_q(x))
}

pub fn instance_to_value(inst: &Instance) -> Value {
    let pad = |v: &[super::Stockpile]| v.iter().map(|p| PileJson { l: p.l, r: p.r }).collect();
    serde_json::to_value(InstanceJson {
        length: inst.length,
        s: qv(inst.speed),
        pads: [pad(&inst.pad1), pad(&inst.pad2)],
        precedence: inst.precedence.clone(),
    })
    .expect("instance serializes")
}

pub fn instance_to_json(inst: &Instance) -> String {
    serde_json::to_string_pretty(&instance_to_value(inst)).expect("instance serializes")
}

pub fn instance_from_json(text: &str) -> Result<Instance, Error> {
    let raw: InstanceJson = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let pad = |v: &[PileJson]| v.iter().map(|p| (p.l, p.r)).collect::<Vec<_>>();
    let mut inst = Instance::new(raw.length, value_q(&raw.s)?, &pad(&raw.pads[0]), &pad(&raw.pads[1]));
    inst.precedence = raw.precedence;
    Ok(inst)
}

pub fn schedule_to_value(sched: &Schedule) -> Value {
    let paths = sched
        .paths
        .iter()
        .map(|p| p.points.iter().map(|&(t, x)| [qv(t), qv(x)]).collect())
        .collect();
    let assignments = sched
        .assignments
        .iter()
        .map(|a| AssignmentJson {
            pile: a.pile,
            reclaimer: a.reclaimer.index() as u8,
            t0: qv(a.t_start),
            t1: qv(a.t_end),
            dir: match a.direction {
                Direction::LeftToRight => "LR".into(),
                Direction::RightToLeft => "RL".into(),
            },
        })
        .collect();
    serde_json::to_value(ScheduleJson { paths, assignments }).expect("schedule serializes")
}

pub fn schedule_to_json(sched: &Schedule) -> String {
    serde_json::to_string_pretty(&schedule_to_value(sched)).expect("schedule serializes")
}

pub fn schedule_from_value(v: Value) -> Result<Schedule, Error> {
    let raw: ScheduleJson = serde_json::from_value(v).map_err(|e| Error::Parse(e.to_string()))?;
    if raw.paths.len() != 2 {
        return Err(Error::Parse(format!("expected 2 paths, got {}", raw.paths.len())));
    }
    let mut paths = Vec::with_capacity(2);
    for p in &raw.paths {
        let pts = p
            .iter()
            .map(|[t, x]| Ok((value_q(t)?, value_q(x)?)))
            .collect::<Result<Vec<_>, Error>>()?;
        paths.push(ReclaimerPath::new(pts));
    }
    let mut assignments = Vec::with_capacity(raw.assignments.len());
    for a in &raw.assignments {
        let direction = match a.dir.as_str() {
            "LR" => Direction::LeftToRight,
            "RL" => Direction::RightToLeft,
            d => return Err(Error::Parse(format!("unknown direction {:?}", d))),
        };
        if a.reclaimer > 1 {
            return Err(Error::Parse(format!("unknown reclaimer {}", a.reclaimer)));
        }
        assignments.push(ReclaimAssignment {
            pile: a.pile,
            reclaimer: Reclaimer::from_index(a.reclaimer as usize),
            t_start: value_q(&a.t0)?,
            t_end: value_q(&a.t1)?,
            direction,
        });
    }
    let p1 = paths.pop().expect("two paths");
    let p0 = paths.pop().expect("two paths");
    Ok(Schedule { paths: [p0, p1], assignments })
}

pub fn schedule_from_json(text: &str) -> Result<Schedule, Error> {
    schedule_from_value(serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?)
}

/// Lengths-only instance: `{"L": int, "s": "a/b", "lengths": [...]}`.
pub fn lengths_to_json(inst: &crate::positioning::LengthsInstance) -> String {
    serde_json::to_string_pretty(&LengthsJson {
        length: inst.length,
        s: qv(inst.speed),
        lengths: inst.lengths.clone(),
    })
    .expect("lengths serialize")
}

pub fn lengths_from_json(text: &str) -> Result<crate::positioning::LengthsInstance, Error> {
    let raw: LengthsJson = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    Ok(crate::positioning::LengthsInstance {
        lengths: raw.lengths,
        length: raw.length,
        speed: value_q(&raw.s)?,
    })
}

pub fn result_to_value(res: &SolveResult) -> Value {
    serde_json::json!({
        "makespan": format_q(res.makespan),
        "solver": res.solver,
        "detail": res.detail,
        "preemptive": res.preemptive,
        "schedule": schedule_to_value(&res.schedule),
    })
}
