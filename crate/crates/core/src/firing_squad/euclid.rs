use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::{Error, Result};
use crate::firing_squad::fs_rule;

use super::history::HistoryDiagram;

/// Signals of the continuous picture.
#[allow(non_camel_case_types)]
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Signal {
    L1,
    l1,
    l2,
    Prime,
    r2,
    r1,
    R1,
}

impl Signal {
    pub const ALL: [Signal; 7] = [Signal::L1, Signal::l1, Signal::l2, Signal::Prime, Signal::r2, Signal::r1, Signal::R1];

    pub fn name(self) -> &'static str {
        match self {
            Signal::L1 => "L1",
            Signal::l1 => "l1",
            Signal::l2 => "l2",
            Signal::Prime => "#'",
            Signal::r2 => "r2",
            Signal::r1 => "r1",
            Signal::R1 => "R1",
        }
    }

    /// Twice the speed, in cells per step (positive = rightwards).
    pub fn double_speed(self) -> i64 {
        match self {
            Signal::L1 | Signal::l1 => -2,
            Signal::l2 => -1,
            Signal::Prime => 0,
            Signal::r2 => 1,
            Signal::r1 | Signal::R1 => 2,
        }
    }

    /// Speed as a fraction `(num, den)`.
    pub fn speed(self) -> (i64, i64) {
        let w = self.double_speed();
        if w % 2 == 0 {
            (w / 2, 1)
        } else {
            (w, 2)
        }
    }
}

impl fmt::Display for Signal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A point of the plane with half-integer space coordinate `x2 / 2` and
/// integer time `t` (growing downwards, forward in time).
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HalfPoint {
    pub x2: i64,
    pub t: i64,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct Segment {
    pub label: Signal,
    pub start: HalfPoint,
    pub end: HalfPoint,
}

/// `#` events at integer points and signal segments between them, inside
/// the window `0 <= x <= width - 1`, `0 <= t <= depth - 1`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct EuclideanDiagram {
    pub points: BTreeSet<(i64, i64)>,
    pub segments: Vec<Segment>,
    pub width: i64,
    pub depth: i64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EuclidViolation {
    BadSlope { segment: usize },
    UnlistedEvent { at: HalfPoint, incoming: Vec<Signal>, outgoing: Vec<Signal>, point: bool },
    ForbiddenCrossing { a: Signal, b: Signal, t_num: i64, t_den: i64 },
    SignalThroughEvent { segment: usize, at: HalfPoint },
    Overlap { a: usize, b: usize },
}

impl fmt::Display for EuclidViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = |v: &[Signal]| v.iter().map(|s| s.name()).collect::<Vec<_>>().join("+");
        match self {
            EuclidViolation::BadSlope { segment } => write!(f, "segment {segment} has the wrong slope"),
            EuclidViolation::UnlistedEvent { at, incoming, outgoing, point } => write!(
                f,
                "unlisted collision at x={}/2 t={}: {} -> {}{}",
                at.x2,
                at.t,
                names(incoming),
                names(outgoing),
                if *point { " (at #)" } else { "" }
            ),
            EuclidViolation::ForbiddenCrossing { a, b, t_num, t_den } => {
                write!(f, "{a} crosses {b} at t={t_num}/{t_den}")
            }
            EuclidViolation::SignalThroughEvent { segment, at } => {
                write!(f, "segment {segment} runs through an event at x={}/2 t={}", at.x2, at.t)
            }
            EuclidViolation::Overlap { a, b } => write!(f, "segments {a} and {b} overlap"),
        }
    }
}

/// Unit pieces `(label, from, to)` moved by a cell state during one step.
fn pieces_of(name: &str, x: i64, t: i64) -> Vec<(Signal, HalfPoint, HalfPoint)> {
    let p = |x2: i64, t: i64| HalfPoint { x2, t };
    let x2 = 2 * x;
    let mut out = Vec::new();
    if name == "#" {
        out.push((Signal::L1, p(x2, t), p(x2 - 2, t + 1)));
        out.push((Signal::l2, p(x2, t), p(x2 - 1, t + 1)));
        out.push((Signal::Prime, p(x2, t), p(x2, t + 1)));
        out.push((Signal::r2, p(x2, t), p(x2 + 1, t + 1)));
        out.push((Signal::R1, p(x2, t), p(x2 + 2, t + 1)));
        return out;
    }
    if name == "#'" {
        out.push((Signal::Prime, p(x2, t), p(x2, t + 1)));
        return out;
    }
    for part in name.split('+') {
        let piece = match part {
            "R1" => (Signal::R1, p(x2, t), p(x2 + 2, t + 1)),
            "r1" => (Signal::r1, p(x2, t), p(x2 + 2, t + 1)),
            "L1" => (Signal::L1, p(x2, t), p(x2 - 2, t + 1)),
            "l1" => (Signal::l1, p(x2, t), p(x2 - 2, t + 1)),
            "r2a" => (Signal::r2, p(x2 - 1, t), p(x2, t + 1)),
            "r2" => (Signal::r2, p(x2, t), p(x2 + 1, t + 1)),
            "l2a" => (Signal::l2, p(x2 + 1, t), p(x2, t + 1)),
            "l2" => (Signal::l2, p(x2, t), p(x2 - 1, t + 1)),
            _ => continue,
        };
        out.push(piece);
    }
    out
}

/// Lifts a valid history to its continuous picture. Forward time runs from
/// the oldest row (`t = 0`) to the most recent one.
pub fn lift_euclidean(d: &HistoryDiagram) -> Result<EuclideanDiagram> {
    let a = fs_rule().alphabet();
    let depth = d.depth() as i64;
    let width = d.width() as i64;
    let mut points = BTreeSet::new();
    let mut pieces = Vec::new();
    for (time, row) in d.rows.iter().enumerate() {
        let t = depth - 1 - time as i64;
        for (x, &s) in row.iter().enumerate() {
            let name = a.name(s);
            if name == "κ" || name == "γ" {
                return Err(Error::Unliftable {
                    cell: x,
                    time,
                    msg: format!("`{name}` has no continuous counterpart"),
                });
            }
            if name == "#" {
                points.insert((x as i64, t));
            }
            if t < depth - 1 {
                pieces.extend(pieces_of(name, x as i64, t));
            }
        }
    }
    let is_point = |p: HalfPoint| p.x2 % 2 == 0 && points.contains(&(p.x2 / 2, p.t));
    // chain pieces of equal label, never through an event point
    let mut by_start: BTreeMap<(Signal, HalfPoint), Vec<usize>> = BTreeMap::new();
    let mut has_pred = vec![false; pieces.len()];
    for (i, &(l, s, _)) in pieces.iter().enumerate() {
        by_start.entry((l, s)).or_default().push(i);
    }
    for &(l, _, e) in &pieces {
        if is_point(e) {
            continue;
        }
        if let Some(next) = by_start.get(&(l, e)) {
            for &j in next {
                has_pred[j] = true;
            }
        }
    }
    let mut used = vec![false; pieces.len()];
    let mut segments = Vec::new();
    for i in 0..pieces.len() {
        if has_pred[i] || used[i] {
            continue;
        }
        let (label, start, mut end) = pieces[i];
        used[i] = true;
        while !is_point(end) {
            let next = by_start
                .get(&(label, end))
                .and_then(|v| v.iter().copied().find(|&j| !used[j]));
            match next {
                Some(j) => {
                    used[j] = true;
                    end = pieces[j].2;
                }
                None => break,
            }
        }
        segments.push(Segment { label, start, end });
    }
    // pieces on a cycle cannot occur with strictly increasing time
    segments.sort_by_key(|s| (s.start.t, s.start.x2, s.label));
    Ok(EuclideanDiagram {
        points,
        segments,
        width,
        depth,
    })
}

impl EuclideanDiagram {
    /// SVG drawing: time grows downwards, 20 px per cell and per step,
    /// `#` events as dots, segments labelled at their midpoints.
    pub fn to_svg(&self) -> String {
        const S: f64 = 20.0;
        const PAD: f64 = 20.0;
        let w = (self.width.max(1) - 1) as f64 * S + 2.0 * PAD;
        let h = (self.depth.max(1) - 1) as f64 * S + 2.0 * PAD;
        let px = |x2: i64| PAD + x2 as f64 * S / 2.0;
        let py = |t: i64| PAD + t as f64 * S;
        let mut out = format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\">\n\
             <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
        );
        for seg in &self.segments {
            let (x1, y1, x2, y2) = (px(seg.start.x2), py(seg.start.t), px(seg.end.x2), py(seg.end.t));
            out.push_str(&format!(
                "<line x1=\"{x1}\" y1=\"{y1}\" x2=\"{x2}\" y2=\"{y2}\" stroke=\"{}\" stroke-width=\"1.5\"/>\n\
                 <text x=\"{}\" y=\"{}\" font-size=\"8\" fill=\"{}\">{}</text>\n",
                signal_color(seg.label),
                (x1 + x2) / 2.0 + 2.0,
                (y1 + y2) / 2.0,
                signal_color(seg.label),
                xml_escape(seg.label.name()),
            ));
        }
        for &(x, t) in &self.points {
            out.push_str(&format!(
                "<circle cx=\"{}\" cy=\"{}\" r=\"3\" fill=\"black\"/>\n<text x=\"{}\" y=\"{}\" font-size=\"9\">#</text>\n",
                px(2 * x),
                py(t),
                px(2 * x) + 4.0,
                py(t) - 4.0
            ));
        }
        out.push_str("</svg>\n");
        out
    }

    fn is_open(&self, p: HalfPoint) -> bool {
        p.t <= 0 || p.t >= self.depth - 1 || p.x2 <= 0 || p.x2 >= 2 * (self.width - 1)
    }
}

fn signal_color(s: Signal) -> &'static str {
    match s {
        Signal::L1 | Signal::R1 => "#c0392b",
        Signal::l1 | Signal::r1 => "#d35400",
        Signal::l2 | Signal::r2 => "#2471a3",
        Signal::Prime => "#555555",
    }
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('\'', "&apos;")
}

const SPLIT: [Signal; 5] = [Signal::L1, Signal::l2, Signal::Prime, Signal::r2, Signal::R1];

fn crossing_allowed(a: Signal, b: Signal) -> bool {
    let pair = if a <= b { (a, b) } else { (b, a) };
    matches!(pair, (Signal::l1, Signal::r2) | (Signal::l2, Signal::r1))
}

fn event_allowed(incoming: &[Signal], outgoing: &[Signal], point: bool) -> bool {
    if point {
        let arrivals_ok = incoming == [Signal::l2, Signal::r2]
            || incoming == [Signal::l1, Signal::Prime, Signal::r1];
        arrivals_ok && (outgoing.is_empty() || outgoing == SPLIT)
    } else {
        incoming == [Signal::L1, Signal::R1] && outgoing == [Signal::l1, Signal::r1]
    }
}

/// Checks slopes, the collision list at every event, and every crossing.
pub fn validate_euclidean(e: &EuclideanDiagram) -> (bool, Vec<EuclidViolation>) {
    let mut out = Vec::new();
    for (i, s) in e.segments.iter().enumerate() {
        let dt = s.end.t - s.start.t;
        if dt <= 0 || s.end.x2 - s.start.x2 != s.label.double_speed() * dt {
            out.push(EuclidViolation::BadSlope { segment: i });
        }
    }
    // events
    let mut events: BTreeMap<HalfPoint, (Vec<Signal>, Vec<Signal>, bool)> = BTreeMap::new();
    for s in &e.segments {
        events.entry(s.end).or_default().0.push(s.label);
        events.entry(s.start).or_default().1.push(s.label);
    }
    for &(x, t) in &e.points {
        events.entry(HalfPoint { x2: 2 * x, t }).or_default().2 = true;
    }
    for (at, (mut inc, mut outg, point)) in events {
        if e.is_open(at) {
            continue;
        }
        inc.sort();
        outg.sort();
        if !event_allowed(&inc, &outg, point) {
            out.push(EuclidViolation::UnlistedEvent {
                at,
                incoming: inc,
                outgoing: outg,
                point,
            });
        }
    }
    // events lying inside a segment
    for (i, s) in e.segments.iter().enumerate() {
        for &(x, t) in &e.points {
            let p = HalfPoint { x2: 2 * x, t };
            if t > s.start.t && t < s.end.t && s.start.x2 + s.label.double_speed() * (t - s.start.t) == p.x2 {
                out.push(EuclidViolation::SignalThroughEvent { segment: i, at: p });
            }
        }
    }
    // pairwise intersections
    for i in 0..e.segments.len() {
        for j in i + 1..e.segments.len() {
            check_pair(e, i, j, &mut out);
        }
    }
    (out.is_empty(), out)
}

fn check_pair(e: &EuclideanDiagram, i: usize, j: usize, out: &mut Vec<EuclidViolation>) {
    let (a, b) = (e.segments[i], e.segments[j]);
    let (wa, wb) = (a.label.double_speed(), b.label.double_speed());
    let lo = a.start.t.max(b.start.t);
    let hi = a.end.t.min(b.end.t);
    if lo > hi {
        return;
    }
    let ia = a.start.x2 - wa * a.start.t;
    let ib = b.start.x2 - wb * b.start.t;
    if wa == wb {
        if ia == ib && lo < hi {
            out.push(EuclidViolation::Overlap { a: i, b: j });
        }
        return;
    }
    // x2 = ia + wa t = ib + wb t
    let mut num = ib - ia;
    let mut den = wa - wb;
    if den < 0 {
        num = -num;
        den = -den;
    }
    if num < lo * den || num > hi * den {
        return;
    }
    let at_end = |s: Segment| num == s.start.t * den || num == s.end.t * den;
    let (ea, eb) = (at_end(a), at_end(b));
    if ea && eb {
        return; // handled as an event
    }
    if num % den == 0 {
        let t = num / den;
        let x2 = ia + wa * t;
        if e.is_open(HalfPoint { x2, t }) {
            return;
        }
    }
    if ea || eb {
        let (seg, other) = if ea { (j, a) } else { (i, b) };
        let t = num / den;
        out.push(EuclidViolation::SignalThroughEvent {
            segment: seg,
            at: HalfPoint {
                x2: other.start.x2 + other.label.double_speed() * (t - other.start.t),
                t,
            },
        });
        return;
    }
    if !crossing_allowed(a.label, b.label) {
        out.push(EuclidViolation::ForbiddenCrossing {
            a: a.label,
            b: b.label,
            t_num: num,
            t_den: den,
        });
    }
}
