//! The radius-1 firing squad, generated from its signal semantics.
//!
//! Each non-special state is a set of particles. One step moves every
//! particle (speed-1 signals one cell, speed-1/2 signals alternate between an
//! arrival phase and a waiting phase), applies the collision rules, and maps
//! every neighbourhood that does not fit the picture to the killer `κ`.

use std::sync::{Arc, OnceLock};

use crate::alphabet::{Alphabet, Sym};
use crate::rule::Rule;

/// Symbol names in declaration order, with their one-character glyphs.
pub const FS_STATES: [(&str, char); 22] = [
    ("B", '.'),
    ("κ", 'K'),
    ("γ", 'G'),
    ("#", '#'),
    ("#'", '|'),
    ("L1", '<'),
    ("l1", '('),
    ("l2", '{'),
    ("l2a", '['),
    ("r2", '}'),
    ("r2a", ']'),
    ("r1", ')'),
    ("R1", '>'),
    ("R1+r2a", 'R'),
    ("L1+l2a", 'L'),
    ("r1+l1", 'x'),
    ("r2a+l2a", 'H'),
    ("l1+r2a", 'a'),
    ("l1+r2", 'b'),
    ("r1+l2a", 'c'),
    ("r1+l2", 'd'),
    ("r1+l1+r2a+l2a", 'X'),
];

pub const BLANK: Sym = Sym(0);
pub const KILLER: Sym = Sym(1);
pub const FIRING: Sym = Sym(2);
pub const SHARP: Sym = Sym(3);
pub const SHARP_PRIME: Sym = Sym(4);

// particle bits
const R1: u8 = 1;
const L1: u8 = 2;
const SR1: u8 = 4; // r1
const SL1: u8 = 8; // l1
const R2A: u8 = 16;
const R2: u8 = 32;
const L2A: u8 = 64;
const L2: u8 = 128;

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
enum Cell {
    Killer,
    Firing,
    Sharp,
    Prime,
    Particles(u8),
}

fn particles_of(name: &str) -> u8 {
    name.split('+')
        .map(|p| match p {
            "R1" => R1,
            "L1" => L1,
            "r1" => SR1,
            "l1" => SL1,
            "r2a" => R2A,
            "r2" => R2,
            "l2a" => L2A,
            "l2" => L2,
            _ => 0,
        })
        .fold(0, |a, b| a | b)
}

fn decode(s: Sym) -> Cell {
    match s {
        KILLER => Cell::Killer,
        FIRING => Cell::Firing,
        SHARP => Cell::Sharp,
        SHARP_PRIME => Cell::Prime,
        _ => Cell::Particles(particles_of(FS_STATES[s.index()].0)),
    }
}

fn encode(bits: u8) -> Option<Sym> {
    if bits == 0 {
        return Some(BLANK);
    }
    (5..FS_STATES.len()).find(|&i| particles_of(FS_STATES[i].0) == bits).map(|i| Sym(i as u16))
}

/// Signals a cell sends to its right neighbour: (speed-1 bits, half-speed).
fn right_movers(c: Cell) -> (u8, bool) {
    match c {
        Cell::Sharp => (R1, true),
        Cell::Particles(p) => (p & (R1 | SR1), p & R2 != 0),
        _ => (0, false),
    }
}

fn left_movers(c: Cell) -> (u8, bool) {
    match c {
        Cell::Sharp => (L1, true),
        Cell::Particles(p) => (p & (L1 | SL1), p & L2 != 0),
        _ => (0, false),
    }
}

/// Whether signals leaving `a` rightwards and `b` leftwards may pass each
/// other on the edge between them.
fn edge_ok(a: Cell, b: Cell) -> bool {
    let (rf, rh) = right_movers(a);
    let (lf, lh) = left_movers(b);
    if rf != 0 && lf != 0 {
        return false;
    }
    if rh && lh {
        return false;
    }
    // a fast signal may only cross the slow signal of the lower-case kind
    if rf != 0 && lh && (rf != SR1 || matches!(a, Cell::Sharp)) {
        return false;
    }
    if lf != 0 && rh && (lf != SL1 || matches!(b, Cell::Sharp)) {
        return false;
    }
    true
}

fn step(l: Cell, c: Cell, r: Cell) -> Option<Cell> {
    use Cell::*;
    if [l, c, r].contains(&Killer) {
        return None;
    }
    if [l, c, r].contains(&Firing) {
        return if l == Firing && c == Firing && r == Firing { Some(Firing) } else { None };
    }
    if l == Sharp && c == Sharp && r == Sharp {
        return Some(Firing);
    }
    if !edge_ok(l, c) || !edge_ok(c, r) {
        return None;
    }
    let (from_l, half_l) = right_movers(l);
    let (from_r, half_r) = left_movers(r);
    let mut arrivals = from_l | from_r;
    if half_l {
        arrivals |= R2A;
    }
    if half_r {
        arrivals |= L2A;
    }
    match c {
        Sharp => (arrivals == 0).then_some(Prime),
        Prime => match arrivals {
            0 => Some(Prime),
            a if a == SR1 | SL1 && from_l == SR1 && from_r == SL1 => Some(Sharp),
            _ => None,
        },
        Particles(p) => {
            if p & (R2A | L2A) == R2A | L2A {
                return (arrivals == 0).then_some(Sharp);
            }
            if arrivals & (SR1 | SL1) == SR1 | SL1 {
                return None;
            }
            let mut next = arrivals;
            if p & R2A != 0 {
                next |= R2;
            }
            if p & L2A != 0 {
                next |= L2;
            }
            if next & (R1 | L1) == R1 | L1 {
                next = (next & !(R1 | L1)) | SR1 | SL1;
            }
            encode(next).map(|s| decode(s))
        }
        Killer | Firing => None,
    }
}

fn to_sym(c: Option<Cell>) -> Sym {
    match c {
        None | Some(Cell::Killer) => KILLER,
        Some(Cell::Firing) => FIRING,
        Some(Cell::Sharp) => SHARP,
        Some(Cell::Prime) => SHARP_PRIME,
        Some(Cell::Particles(p)) => encode(p).unwrap_or(KILLER),
    }
}

pub fn fs_alphabet() -> Arc<Alphabet> {
    fs_rule().alphabet().clone()
}

fn build() -> Rule {
    let alphabet = Alphabet::new(FS_STATES.iter().map(|s| s.0))
        .and_then(|a| a.with_glyphs(FS_STATES.iter().map(|s| s.1).collect()))
        .expect("firing squad alphabet");
    Rule::from_fn("fs", Arc::new(alphabet), 1, |nb| {
        to_sym(step(decode(nb[0]), decode(nb[1]), decode(nb[2])))
    })
    .expect("firing squad table")
}

/// The shipped firing squad rule.
pub fn fs_rule() -> &'static Rule {
    static RULE: OnceLock<Rule> = OnceLock::new();
    RULE.get_or_init(build)
}

/// Text of the shipped rule file.
pub fn fs_rule_file() -> String {
    let mut s = String::new();
    s.push_str(
        ";; Radius-1 firing squad over 22 states.\n\
         ;; Particles: R1/L1 and r1/l1 move one cell per step; r2/l2 move one cell\n\
         ;; every two steps (r2a/l2a = just arrived, r2/l2 = about to move);\n\
         ;; #' is a stationary wall. A # with blank neighbours becomes #' and emits\n\
         ;; L1+l2a to the left and R1+r2a to the right. R1 meeting L1 in a cell\n\
         ;; becomes r1+l1; r2a meeting l2a becomes # one step later; #' hit by r1\n\
         ;; from the left and l1 from the right at once becomes #. r1 crosses l2 and\n\
         ;; l1 crosses r2; any other crossing, any swap of two fast signals and any\n\
         ;; neighbourhood outside this picture gives κ, which spreads. ### gives γ,\n\
         ;; γγγ stays γ, and every other neighbourhood touching γ gives κ.\n",
    );
    s.push_str(&fs_rule().to_rule_file());
    s
}
