//! Period words along the orbit of `ω(# B^n)ω`, from the signal geometry.

use std::fmt;

use crate::alphabet::Sym;
use crate::config::apply_periodic_raw;
use crate::error::{Error, Result};
use crate::firing_squad::{fs_rule, BLANK, FIRING, FS_STATES, KILLER, SHARP, SHARP_PRIME};

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum SchemaPhase {
    /// `ω(# B^m)ω`.
    Sharps,
    /// A column `#'` per period with the split products in flight.
    Signals,
    /// `κ` has appeared and spreads.
    Killed,
    /// `∞γ`.
    Fired,
}

/// One period `head B^x1 A1 ... B^xi Ai B^tail` of the configuration reached
/// from `ω(# B^spacing)ω` after `time` steps. The orbit runs in phases: the
/// current phase started from `ω(# B^current)ω`, `local` steps ago.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PeriodSchema {
    pub spacing: usize,
    pub time: usize,
    pub current: usize,
    pub local: usize,
    pub phase: SchemaPhase,
    pub head: Sym,
    pub blocks: Vec<(usize, Sym)>,
    pub tail: usize,
}

impl PeriodSchema {
    fn from_word(spacing: usize, time: usize, current: usize, local: usize, phase: SchemaPhase, w: &[Sym]) -> Self {
        let mut blocks = Vec::new();
        let mut run = 0;
        for &s in &w[1..] {
            if s == BLANK {
                run += 1;
            } else {
                blocks.push((run, s));
                run = 0;
            }
        }
        PeriodSchema {
            spacing,
            time,
            current,
            local,
            phase,
            head: w[0],
            blocks,
            tail: run,
        }
    }

    /// The period word, starting at a column.
    pub fn word(&self) -> Vec<Sym> {
        let mut w = vec![self.head];
        for &(x, a) in &self.blocks {
            w.extend(std::iter::repeat_n(BLANK, x));
            w.push(a);
        }
        w.extend(std::iter::repeat_n(BLANK, self.tail));
        w
    }

    pub fn period(&self) -> usize {
        1 + self.blocks.iter().map(|b| b.0 + 1).sum::<usize>() + self.tail
    }

    /// Gaps `x1..xi` followed by the trailing gap.
    pub fn gaps(&self) -> Vec<usize> {
        self.blocks.iter().map(|b| b.0).chain([self.tail]).collect()
    }
}

impl fmt::Display for PeriodSchema {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = |s: Sym| FS_STATES[s.index()].0;
        write!(f, "{}", name(self.head))?;
        let gap = |f: &mut fmt::Formatter<'_>, x: usize| if x > 0 { write!(f, " B^{x}") } else { Ok(()) };
        for &(x, a) in &self.blocks {
            gap(f, x)?;
            write!(f, " {}", name(a))?;
        }
        gap(f, self.tail)
    }
}

fn cell_symbol(parts: &[&str]) -> Sym {
    let mut want: Vec<&str> = parts.to_vec();
    want.sort_unstable();
    if want.is_empty() {
        return BLANK;
    }
    FS_STATES
        .iter()
        .position(|(name, _)| {
            let mut have: Vec<&str> = name.split('+').collect();
            have.sort_unstable();
            have == want
        })
        .map_or(KILLER, |i| Sym(i as u16))
}

/// A signal of the split phase, at cell `x` with `2x = a*tau + b*p + c` on
/// steps `tau` of the given parity, where `p = m + 1` is the period.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct SignalLine {
    pub signal: &'static str,
    pub odd: bool,
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

impl fmt::Display for SignalLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut rhs = String::new();
        for (coef, var) in [(self.a, "t"), (self.b, "p"), (self.c, "")] {
            if coef == 0 {
                continue;
            }
            let sign = if coef < 0 { "-" } else if rhs.is_empty() { "" } else { "+" };
            let mag = coef.unsigned_abs();
            let term = if var.is_empty() || mag != 1 { format!("{mag}{var}") } else { var.to_string() };
            if rhs.is_empty() {
                rhs = format!("{sign}{term}");
            } else {
                rhs = format!("{rhs} {sign} {term}");
            }
        }
        let parity = if self.odd { "odd" } else { "even" };
        write!(f, "2x({}) = {} (t {parity})", self.signal, if rhs.is_empty() { "0".into() } else { rhs })
    }
}

const fn line(signal: &'static str, odd: bool, a: i64, b: i64, c: i64) -> SignalLine {
    SignalLine { signal, odd, a, b, c }
}

/// The relations used by the geometry; [`extract_relations`] re-derives them
/// from simulation.
pub const SIGNAL_LINES: [SignalLine; 8] = [
    line("R", false, 2, 0, 0),
    line("R", true, 2, 0, 0),
    line("L", false, -2, 2, 0),
    line("L", true, -2, 2, 0),
    line("r2", false, 1, 0, 0),
    line("r2", true, 1, 0, 1),
    line("l2", false, -1, 2, 0),
    line("l2", true, -1, 2, -1),
];

fn position(signal: &str, p: usize, tau: usize) -> usize {
    let odd = tau % 2 == 1;
    let l = SIGNAL_LINES.iter().find(|l| l.signal == signal && l.odd == odd).expect("listed signal");
    let twice = l.a * tau as i64 + l.b * p as i64 + l.c;
    (twice / 2).rem_euclid(p as i64) as usize
}

/// Period word of the phase started by `ω(# B^m)ω`, `tau` steps in, for
/// `tau` before the next doubling. The fast pair meets at `tau = p/2` and
/// continues as `r1`, `l1`; with `p` odd it would cross an edge instead.
fn phase_word(m: usize, tau: usize) -> (SchemaPhase, Vec<Sym>) {
    let p = m + 1;
    if tau == 0 {
        let mut w = vec![SHARP];
        w.extend(std::iter::repeat_n(BLANK, m));
        return (SchemaPhase::Sharps, w);
    }
    if m == 0 {
        return (SchemaPhase::Fired, vec![FIRING]);
    }
    let mut cells: Vec<Vec<&str>> = vec![Vec::new(); p];
    let odd = tau % 2 == 1;
    let met = 2 * tau >= p;
    cells[position("r2", p, tau)].push(if odd { "r2a" } else { "r2" });
    cells[position("l2", p, tau)].push(if odd { "l2a" } else { "l2" });
    cells[position("R", p, tau)].push(if met { "r1" } else { "R1" });
    cells[position("L", p, tau)].push(if met { "l1" } else { "L1" });
    let mut w: Vec<Sym> = cells.iter().map(|c| cell_symbol(c)).collect();
    w[0] = SHARP_PRIME;
    if p % 2 == 1 && 2 * tau > p {
        // the fast pair sits on both sides of an edge at tau = (p-1)/2
        let born = p.div_ceil(2);
        let r = tau - born;
        let (a, b) = ((p - 1) / 2, p.div_ceil(2));
        for (i, c) in w.iter_mut().enumerate() {
            let d = if i <= a { (a - i).min(i + p - b) } else if i >= b { (i - b).min(a + p - i) } else { 0 };
            if d <= r {
                *c = KILLER;
            }
        }
        return (SchemaPhase::Killed, w);
    }
    (SchemaPhase::Signals, w)
}

/// Schema of the configuration reached from `ω(# B^n)ω` after `t` steps,
/// computed from the signal geometry. Each phase with an odd spacing `m`
/// ends after `m + 1` steps in `ω(# B^((m-1)/2))ω`.
pub fn orbit_period_schemas(n: usize, t: usize) -> Result<PeriodSchema> {
    if n == 0 {
        return Err(Error::Precondition("spacing must be at least 1".into()));
    }
    let (mut m, mut tau) = (n, t);
    while m > 0 && m % 2 == 1 && tau > m {
        tau -= m + 1;
        m = (m - 1) / 2;
    }
    let (phase, w) = phase_word(m, tau);
    let w = match phase {
        SchemaPhase::Killed | SchemaPhase::Fired => minimal(&w),
        _ => w,
    };
    Ok(PeriodSchema::from_word(n, t, m, tau, phase, &w))
}

fn minimal(w: &[Sym]) -> Vec<Sym> {
    w[..crate::config::primitive_root_len(w)].to_vec()
}

/// Period word at time `t`, by running the rule on `# B^n` with the
/// alignment kept (column of the first `#` at cell 0).
pub fn simulated_period(n: usize, t: usize) -> Vec<Sym> {
    let mut w = vec![SHARP];
    w.extend(std::iter::repeat_n(BLANK, n));
    for _ in 0..t {
        w = apply_periodic_raw(fs_rule(), &w);
    }
    w
}

/// Whether the schema describes the simulated configuration exactly.
pub fn schema_matches_simulation(s: &PeriodSchema) -> bool {
    let sim = simulated_period(s.spacing, s.time);
    let w = s.word();
    sim.len() % w.len() == 0 && sim.iter().enumerate().all(|(i, &c)| c == w[i % w.len()])
}

fn particle_cells(w: &[Sym], names: &[&str]) -> Vec<usize> {
    (0..w.len())
        .filter(|&i| FS_STATES[w[i].index()].0.split('+').any(|q| names.contains(&q)))
        .collect()
}

/// Fits `2x = a*tau + b*p + c` to the simulated positions of each signal in
/// the split phases `ω(# B^m)ω -> ...` for odd `m <= max_m`, and checks the
/// fit on every sample. `None` when some signal does not follow a line.
pub fn extract_relations(max_m: usize) -> Option<Vec<SignalLine>> {
    let kinds: [(&'static str, &[&str]); 4] = [("R", &["R1", "r1"]), ("L", &["L1", "l1"]), ("r2", &["r2", "r2a"]), ("l2", &["l2", "l2a"])];
    let mut out = Vec::new();
    for (signal, names) in kinds {
        for odd in [false, true] {
            let mut samples: Vec<[i64; 3]> = Vec::new();
            for m in (3..=max_m).step_by(2) {
                let p = m + 1;
                for tau in (1..p).filter(|t| (t % 2 == 1) == odd) {
                    let w = simulated_period(m, tau);
                    let cells = particle_cells(&w[..p], names);
                    if cells.len() != 1 {
                        return None;
                    }
                    samples.push([tau as i64, p as i64, 2 * cells[0] as i64]);
                }
            }
            let (a, b, c) = fit_plane(&samples)?;
            out.push(SignalLine { signal, odd, a, b, c });
        }
    }
    Some(out)
}

/// Integer plane `z = a*x + b*y + c` through all samples.
fn fit_plane(s: &[[i64; 3]]) -> Option<(i64, i64, i64)> {
    for i in 0..s.len() {
        for j in i + 1..s.len() {
            for k in j + 1..s.len() {
                let (p, q, r) = (s[i], s[j], s[k]);
                let det = (q[0] - p[0]) * (r[1] - p[1]) - (r[0] - p[0]) * (q[1] - p[1]);
                if det == 0 {
                    continue;
                }
                let na = (q[2] - p[2]) * (r[1] - p[1]) - (r[2] - p[2]) * (q[1] - p[1]);
                let nb = (q[0] - p[0]) * (r[2] - p[2]) - (r[0] - p[0]) * (q[2] - p[2]);
                if na % det != 0 || nb % det != 0 {
                    return None;
                }
                let (a, b) = (na / det, nb / det);
                let c = p[2] - a * p[0] - b * p[1];
                return s.iter().all(|z| z[2] == a * z[0] + b * z[1] + c).then_some((a, b, c));
            }
        }
    }
    None
}
