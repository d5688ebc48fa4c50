//! Deterministic automata over symbol indices, with the two block-map
//! operations the language pipelines need: forward image (subset
//! construction) and preimage (deterministic product).

use std::collections::HashMap;

use crate::alphabet::Sym;
use crate::error::{Error, Result};
use crate::rule::Rule;

pub const DEAD: u32 = u32::MAX;

#[derive(Clone, Debug)]
pub struct Dfa {
    k: usize,
    trans: Vec<u32>,
    accept: Vec<bool>,
    start: u32,
}

fn budget_check(n: usize, limit: usize) -> Result<()> {
    if n > limit {
        return Err(Error::BudgetExceeded {
            what: "automaton states",
            needed: n as u128,
            limit: limit as u128,
        });
    }
    Ok(())
}

impl Dfa {
    /// Language with no words.
    pub fn empty(k: usize) -> Dfa {
        Dfa {
            k,
            trans: vec![DEAD; k],
            accept: vec![false],
            start: 0,
        }
    }

    /// Automaton from a dense transition table (`DEAD` for missing edges).
    pub fn from_table(k: usize, trans: Vec<u32>, accept: Vec<bool>, start: u32) -> Result<Dfa> {
        let n = accept.len();
        if trans.len() != n * k || start as usize >= n || trans.iter().any(|&t| t != DEAD && t as usize >= n) {
            return Err(Error::Precondition("malformed transition table".into()));
        }
        Ok(Dfa { k, trans, accept, start })
    }

    /// Every word, of every length.
    pub fn universal(k: usize) -> Dfa {
        Dfa {
            k,
            trans: vec![0; k],
            accept: vec![true],
            start: 0,
        }
    }

    /// All words of length `len` whose letters are allowed.
    pub fn all_of_length(k: usize, len: usize, allowed: Option<&[bool]>) -> Dfa {
        let mut trans = vec![DEAD; k * (len + 1)];
        for level in 0..len {
            for a in 0..k {
                if allowed.is_none_or(|m| m[a]) {
                    trans[level * k + a] = (level + 1) as u32;
                }
            }
        }
        let mut accept = vec![false; len + 1];
        accept[len] = true;
        Dfa { k, trans, accept, start: 0 }.trimmed()
    }

    /// Finite language given by a list of words.
    pub fn from_words<'a>(k: usize, words: impl IntoIterator<Item = &'a [Sym]>) -> Dfa {
        let mut trans = vec![DEAD; k];
        let mut accept = vec![false];
        for w in words {
            let mut q = 0usize;
            for s in w {
                let slot = q * k + s.index();
                if trans[slot] == DEAD {
                    trans[slot] = accept.len() as u32;
                    accept.push(false);
                    trans.extend(std::iter::repeat_n(DEAD, k));
                }
                q = trans[slot] as usize;
            }
            accept[q] = true;
        }
        Dfa { k, trans, accept, start: 0 }.minimized()
    }

    pub fn alphabet_size(&self) -> usize {
        self.k
    }

    pub fn num_states(&self) -> usize {
        self.accept.len()
    }

    #[inline]
    pub fn next(&self, q: u32, a: usize) -> u32 {
        self.trans[q as usize * self.k + a]
    }

    pub fn accepts(&self, word: &[Sym]) -> bool {
        let mut q = self.start;
        for s in word {
            if s.index() >= self.k {
                return false;
            }
            q = self.next(q, s.index());
            if q == DEAD {
                return false;
            }
        }
        self.accept[q as usize]
    }

    /// Whether some path reads `word` from the start state (the word is a
    /// prefix of an accepted word when the automaton is trimmed).
    pub fn accepts_prefix(&self, word: &[Sym]) -> bool {
        let mut q = self.start;
        for s in word {
            if s.index() >= self.k {
                return false;
            }
            q = self.next(q, s.index());
            if q == DEAD {
                return false;
            }
        }
        true
    }

    pub fn is_empty(&self) -> bool {
        !self.accept.iter().any(|&a| a) || self.trimmed().accept.iter().all(|&a| !a)
    }

    /// Removes transitions on letters that are not allowed.
    pub fn restricted(&self, allowed: &[bool]) -> Dfa {
        let mut d = self.clone();
        for (i, t) in d.trans.iter_mut().enumerate() {
            if !allowed[i % self.k] {
                *t = DEAD;
            }
        }
        d.trimmed()
    }

    /// Keeps only states that are reachable and co-reachable. The start state
    /// is always kept.
    pub fn trimmed(&self) -> Dfa {
        let n = self.num_states();
        let k = self.k;
        let mut reach = vec![false; n];
        let mut stack = vec![self.start as usize];
        reach[self.start as usize] = true;
        while let Some(q) = stack.pop() {
            for a in 0..k {
                let t = self.trans[q * k + a];
                if t != DEAD && !reach[t as usize] {
                    reach[t as usize] = true;
                    stack.push(t as usize);
                }
            }
        }
        let mut rev: Vec<Vec<u32>> = vec![Vec::new(); n];
        for q in 0..n {
            for a in 0..k {
                let t = self.trans[q * k + a];
                if t != DEAD {
                    rev[t as usize].push(q as u32);
                }
            }
        }
        let mut co = vec![false; n];
        let mut stack: Vec<usize> = (0..n).filter(|&q| self.accept[q]).collect();
        for &q in &stack {
            co[q] = true;
        }
        while let Some(q) = stack.pop() {
            for &p in &rev[q] {
                if !co[p as usize] {
                    co[p as usize] = true;
                    stack.push(p as usize);
                }
            }
        }
        let keep: Vec<bool> = (0..n).map(|q| reach[q] && co[q]).collect();
        if !keep[self.start as usize] {
            return Dfa::empty(k);
        }
        let mut remap = vec![DEAD; n];
        let mut count = 0u32;
        for q in 0..n {
            if keep[q] {
                remap[q] = count;
                count += 1;
            }
        }
        let mut trans = Vec::with_capacity(count as usize * k);
        let mut accept = Vec::with_capacity(count as usize);
        for q in 0..n {
            if keep[q] {
                for a in 0..k {
                    let t = self.trans[q * k + a];
                    trans.push(if t == DEAD { DEAD } else { remap[t as usize] });
                }
                accept.push(self.accept[q]);
            }
        }
        Dfa {
            k,
            trans,
            accept,
            start: remap[self.start as usize],
        }
    }

    /// Minimal equivalent DFA by iterated partition refinement (Moore).
    pub fn minimized(&self) -> Dfa {
        let d = self.trimmed();
        let n = d.num_states();
        let k = d.k;
        let mut class: Vec<u32> = d.accept.iter().map(|&a| a as u32).collect();
        let mut count = {
            let mut seen = [false; 2];
            for &c in &class {
                seen[c as usize] = true;
            }
            seen.iter().filter(|&&x| x).count()
        };
        loop {
            let mut ids: HashMap<Vec<u32>, u32> = HashMap::with_capacity(n);
            let mut next = Vec::with_capacity(n);
            let mut sig = Vec::with_capacity(k + 1);
            for q in 0..n {
                sig.clear();
                sig.push(class[q]);
                for a in 0..k {
                    let t = d.trans[q * k + a];
                    sig.push(if t == DEAD { DEAD } else { class[t as usize] });
                }
                let len = ids.len() as u32;
                let id = *ids.entry(sig.clone()).or_insert(len);
                next.push(id);
            }
            let new_count = ids.len();
            class = next;
            if new_count == count {
                break;
            }
            count = new_count;
        }
        let mut trans = vec![DEAD; count * k];
        let mut accept = vec![false; count];
        for q in 0..n {
            let c = class[q] as usize;
            accept[c] = d.accept[q];
            for a in 0..k {
                let t = d.trans[q * k + a];
                trans[c * k + a] = if t == DEAD { DEAD } else { class[t as usize] };
            }
        }
        Dfa {
            k,
            trans,
            accept,
            start: class[d.start as usize],
        }
    }

    /// Accepted words in lexicographic (symbol index) order. Only meaningful for
    /// finite languages; stops with an error after `limit` words.
    pub fn words(&self, limit: usize) -> Result<Vec<Vec<Sym>>> {
        let d = self.trimmed();
        let mut out = Vec::new();
        let mut prefix = Vec::new();
        fn rec(d: &Dfa, q: u32, prefix: &mut Vec<Sym>, out: &mut Vec<Vec<Sym>>, limit: usize, depth: usize) -> Result<()> {
            if depth > 4096 {
                return Err(Error::Precondition("language is not finite".into()));
            }
            if d.accept[q as usize] {
                budget_check(out.len() + 1, limit)?;
                out.push(prefix.clone());
            }
            for a in 0..d.k {
                let t = d.next(q, a);
                if t != DEAD {
                    prefix.push(Sym(a as u16));
                    rec(d, t, prefix, out, limit, depth + 1)?;
                    prefix.pop();
                }
            }
            Ok(())
        }
        if d.accept.iter().any(|&a| a) {
            rec(&d, d.start, &mut prefix, &mut out, limit, 0)?;
        }
        Ok(out)
    }

    /// Automaton of all factors of accepted words.
    pub fn factors(&self, max_states: usize) -> Result<Dfa> {
        let d = self.trimmed();
        if d.is_empty() {
            return Ok(Dfa::empty(self.k));
        }
        let k = d.k;
        let init: Vec<u32> = (0..d.num_states() as u32).collect();
        let mut index: HashMap<Vec<u32>, u32> = HashMap::new();
        let mut subsets = vec![init.clone()];
        index.insert(init, 0);
        let mut trans = Vec::new();
        let mut i = 0;
        while i < subsets.len() {
            for a in 0..k {
                let mut next: Vec<u32> = subsets[i].iter().map(|&q| d.next(q, a)).filter(|&t| t != DEAD).collect();
                if next.is_empty() {
                    trans.push(DEAD);
                    continue;
                }
                next.sort_unstable();
                next.dedup();
                let id = match index.get(&next) {
                    Some(&id) => id,
                    None => {
                        let id = subsets.len() as u32;
                        budget_check(id as usize + 1, max_states)?;
                        index.insert(next.clone(), id);
                        subsets.push(next);
                        id
                    }
                };
                trans.push(id);
            }
            i += 1;
        }
        let accept = vec![true; subsets.len()];
        Ok(Dfa { k, trans, accept, start: 0 }.minimized())
    }

    /// Automaton of `{ f(u) : u accepted }` where `f` is the block map of
    /// `rule` (words shorter than `2r+1` have no image). Subset construction
    /// over pairs (state, last `2r` letters), minimised.
    pub fn image(&self, rule: &Rule, max_states: usize) -> Result<Dfa> {
        let k = self.k;
        if rule.alphabet().len() != k {
            return Err(Error::AlphabetMismatch("automaton and rule alphabets differ".into()));
        }
        let span = 2 * rule.radius();
        let k2 = k.pow(span as u32) as u64;
        let table = rule.table();
        // initial subset: every (state, window) reachable by reading `span` letters
        let mut init: Vec<u64> = vec![self.start as u64 * k2];
        for _ in 0..span {
            let mut next = Vec::with_capacity(init.len() * k);
            for &p in &init {
                let (q, w) = ((p / k2) as u32, p % k2);
                for a in 0..k {
                    let t = self.next(q, a);
                    if t != DEAD {
                        next.push(t as u64 * k2 + ((w * k as u64 + a as u64) % k2.max(1)));
                    }
                }
            }
            next.sort_unstable();
            next.dedup();
            init = next;
        }
        if init.is_empty() {
            return Ok(Dfa::empty(k));
        }
        let mut index: HashMap<Vec<u64>, u32> = HashMap::new();
        let mut subsets: Vec<Vec<u64>> = Vec::new();
        index.insert(init.clone(), 0);
        subsets.push(init);
        let mut trans: Vec<u32> = Vec::new();
        let mut accept: Vec<bool> = Vec::new();
        let mut buckets: Vec<Vec<u64>> = vec![Vec::new(); k];
        let mut i = 0;
        while i < subsets.len() {
            for b in buckets.iter_mut() {
                b.clear();
            }
            let subset = std::mem::take(&mut subsets[i]);
            let mut acc = false;
            for &p in &subset {
                let (q, w) = ((p / k2) as u32, p % k2);
                acc |= self.accept[q as usize];
                for a in 0..k {
                    let t = self.next(q, a);
                    if t == DEAD {
                        continue;
                    }
                    let full = w as usize * k + a;
                    let out = table[full].index();
                    let nw = if span == 0 { 0 } else { full as u64 % k2 };
                    buckets[out].push(t as u64 * k2 + nw);
                }
            }
            accept.push(acc);
            for b in buckets.iter_mut() {
                if b.is_empty() {
                    trans.push(DEAD);
                    continue;
                }
                b.sort_unstable();
                b.dedup();
                let id = match index.get(b.as_slice()) {
                    Some(&id) => id,
                    None => {
                        let id = index.len() as u32;
                        budget_check(id as usize + 1, max_states)?;
                        index.insert(b.clone(), id);
                        subsets.push(b.clone());
                        id
                    }
                };
                trans.push(id);
            }
            subsets[i] = subset;
            i += 1;
        }
        let d = Dfa { k, trans, accept, start: 0 }.minimized();
        budget_check(d.num_states(), max_states)?;
        Ok(d)
    }

    /// Automaton of `{ u : f(u) accepted }` (every accepted `u` has length at
    /// least `2r`). Deterministic product with a sliding window, minimised.
    pub fn preimage(&self, rule: &Rule, max_states: usize) -> Result<Dfa> {
        let k = self.k;
        if rule.alphabet().len() != k {
            return Err(Error::AlphabetMismatch("automaton and rule alphabets differ".into()));
        }
        let span = 2 * rule.radius();
        let k2 = k.pow(span as u32) as u64;
        let table = rule.table();
        // state key: (filled, q, window); filled < span means still warming up
        let key = |filled: usize, q: u32, w: u64| -> (u8, u32, u64) { (filled as u8, q, w) };
        let mut index: HashMap<(u8, u32, u64), u32> = HashMap::new();
        let mut states: Vec<(u8, u32, u64)> = Vec::new();
        let start = key(0, self.start, 0);
        index.insert(start, 0);
        states.push(start);
        let mut trans = Vec::new();
        let mut accept = Vec::new();
        let mut i = 0;
        while i < states.len() {
            let (filled, q, w) = states[i];
            let filled = filled as usize;
            accept.push(filled == span && self.accept[q as usize]);
            for a in 0..k {
                let next = if filled < span {
                    Some(key(filled + 1, q, w * k as u64 + a as u64))
                } else {
                    let full = w as usize * k + a;
                    let t = self.next(q, table[full].index());
                    if t == DEAD {
                        None
                    } else {
                        Some(key(span, t, if span == 0 { 0 } else { full as u64 % k2 }))
                    }
                };
                match next {
                    None => trans.push(DEAD),
                    Some(s) => {
                        let id = match index.get(&s) {
                            Some(&id) => id,
                            None => {
                                let id = states.len() as u32;
                                budget_check(id as usize + 1, max_states.saturating_mul(k).max(max_states))?;
                                index.insert(s, id);
                                states.push(s);
                                id
                            }
                        };
                        trans.push(id);
                    }
                }
            }
            i += 1;
        }
        let d = Dfa { k, trans, accept, start: 0 }.minimized();
        budget_check(d.num_states(), max_states)?;
        Ok(d)
    }
}
