//! Regular forms of the recognizer: configurations whose signals never met
//! in the past, and their finite-time images.

use std::collections::HashMap;

use crate::alphabet::Sym;
use crate::dfa::{Dfa, DEAD};
use crate::error::Result;
use crate::firing_squad::{fs_rule, live_mask, FS_STATES, SHARP, SHARP_PRIME};

const T_L1: u8 = 1;
const T_SL1: u8 = 2;
const T_L2: u8 = 4;
const T_R2: u8 = 8;
const T_SR1: u8 = 16;
const T_R1: u8 = 32;
const T_COL: u8 = 64;

/// Signal kinds that may not appear to the right of a given kind: the pair
/// would have met in the past, and only `l1/r2` and `r1/l2` pass each other.
fn forbids(t: u8) -> u8 {
    match t {
        T_L1 => T_L2 | T_R2 | T_SR1 | T_R1 | T_COL,
        T_SL1 => T_L2 | T_SR1 | T_R1 | T_COL,
        T_L2 => T_R2 | T_R1 | T_COL,
        T_R2 => T_SR1 | T_R1,
        T_COL => T_R2 | T_SR1 | T_R1,
        _ => 0,
    }
}

#[derive(Copy, Clone, Default)]
struct Letter {
    kinds: u8,
    r2_wait: bool,
    r2_arrived: bool,
    l2_wait: bool,
    l2_arrived: bool,
}

/// Letters of a config with an event-free past: single signals, the two
/// passing pairs, and `#'`.
fn letter(s: Sym) -> Option<Letter> {
    if s == SHARP_PRIME {
        return Some(Letter {
            kinds: T_COL,
            ..Letter::default()
        });
    }
    let name = FS_STATES[s.index()].0;
    if name == "B" {
        return Some(Letter::default());
    }
    let mut l = Letter::default();
    for p in name.split('+') {
        match p {
            "L1" => l.kinds |= T_L1,
            "l1" => l.kinds |= T_SL1,
            "l2" => (l.kinds, l.l2_wait) = (l.kinds | T_L2, true),
            "l2a" => (l.kinds, l.l2_arrived) = (l.kinds | T_L2, true),
            "r2" => (l.kinds, l.r2_wait) = (l.kinds | T_R2, true),
            "r2a" => (l.kinds, l.r2_arrived) = (l.kinds | T_R2, true),
            "r1" => l.kinds |= T_SR1,
            "R1" => l.kinds |= T_R1,
            _ => return None,
        }
    }
    let passing = [T_SL1 | T_R2, T_SR1 | T_L2];
    (l.kinds.count_ones() == 1 || passing.contains(&l.kinds)).then_some(l)
}

/// Words of configurations with an event-free past and at least
/// `min_columns` columns of `#'` (none at all when `columns` is false).
pub fn eventless(min_columns: u8, columns: bool) -> Dfa {
    let k = FS_STATES.len();
    let letters: Vec<Option<Letter>> = (0..k)
        .map(|i| letter(Sym(i as u16)).filter(|l| columns || l.kinds != T_COL))
        .collect();
    // state: (forbidden kinds, previous cell holds a waiting r2, previous cell holds an arrived l2, columns seen)
    type Key = (u8, bool, bool, u8);
    let mut index: HashMap<Key, u32> = HashMap::new();
    let mut states: Vec<Key> = vec![(0, false, false, 0)];
    index.insert(states[0], 0);
    let mut trans = Vec::new();
    let mut i = 0;
    while i < states.len() {
        let (forbidden, r2_wait, l2_arrived, cols) = states[i];
        for l in &letters {
            let next = l.and_then(|l| {
                let ok = l.kinds & forbidden == 0 && !(r2_wait && l.r2_arrived) && !(l2_arrived && l.l2_wait);
                ok.then(|| {
                    let f = (0..7).map(|b| forbids(l.kinds & (1 << b))).fold(forbidden, |a, b| a | b);
                    let c = (cols + (l.kinds == T_COL) as u8).min(min_columns);
                    (f, l.r2_wait, l.l2_arrived, c)
                })
            });
            trans.push(match next {
                None => DEAD,
                Some(key) => *index.entry(key).or_insert_with(|| {
                    states.push(key);
                    states.len() as u32 - 1
                }),
            });
        }
        i += 1;
    }
    let accept = states.iter().map(|s| s.3 >= min_columns).collect();
    Dfa::from_table(k, trans, accept, 0).expect("well-formed table").minimized()
}

/// Letters allowed in the past, optionally without columns.
pub fn past_mask(columns: bool) -> Vec<bool> {
    let mut m = live_mask();
    if !columns {
        m[SHARP.index()] = false;
        m[SHARP_PRIME.index()] = false;
    }
    m
}

/// The images `f^s(L)` for `s = 0..=steps` of a factorial language, each
/// step keeping only words over `mask`.
pub fn evolve(start: &Dfa, steps: usize, mask: &[bool], max_states: usize) -> Result<Vec<Dfa>> {
    let mut out = vec![start.restricted(mask).minimized()];
    for _ in 0..steps {
        let next = out.last().expect("nonempty").image(fs_rule(), max_states)?.restricted(mask).minimized();
        out.push(next);
    }
    Ok(out)
}
