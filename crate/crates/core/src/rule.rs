use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt::Write as _;
use std::sync::Arc;

use crate::alphabet::{Alphabet, Sym};
use crate::error::{Error, Result};

/// A radius-`r` local rule `A^(2r+1) -> A`, stored as a dense table indexed by
/// the mixed-radix encoding of the neighbourhood (leftmost cell most significant).
#[derive(Clone, Debug)]
pub struct Rule {
    alphabet: Arc<Alphabet>,
    radius: usize,
    table: Vec<Sym>,
    name: String,
}

impl PartialEq for Rule {
    fn eq(&self, other: &Self) -> bool {
        self.radius == other.radius && self.alphabet == other.alphabet && self.table == other.table
    }
}

impl Eq for Rule {}

/// Upper bound on dense table size.
const MAX_TABLE: u128 = 1 << 26;

fn table_len(k: usize, radius: usize) -> Result<usize> {
    let n = (k as u128).checked_pow(2 * radius as u32 + 1).unwrap_or(u128::MAX);
    if n > MAX_TABLE {
        return Err(Error::BudgetExceeded {
            what: "rule table entries",
            needed: n,
            limit: MAX_TABLE,
        });
    }
    Ok(n as usize)
}

impl Rule {
    /// Builds a rule by evaluating `f` on every neighbourhood.
    pub fn from_fn(
        name: impl Into<String>,
        alphabet: Arc<Alphabet>,
        radius: usize,
        mut f: impl FnMut(&[Sym]) -> Sym,
    ) -> Result<Rule> {
        let k = alphabet.len();
        let len = table_len(k, radius)?;
        let width = 2 * radius + 1;
        let mut table = Vec::with_capacity(len);
        let mut nb = vec![Sym(0); width];
        for _ in 0..len {
            let out = f(&nb);
            if out.index() >= k {
                return Err(Error::Precondition(format!("local map produced symbol #{} outside the alphabet", out.0)));
            }
            table.push(out);
            // odometer increment, rightmost cell fastest
            for cell in nb.iter_mut().rev() {
                cell.0 += 1;
                if cell.index() < k {
                    break;
                }
                cell.0 = 0;
            }
        }
        Ok(Rule {
            alphabet,
            radius,
            table,
            name: name.into(),
        })
    }

    pub fn from_table(name: impl Into<String>, alphabet: Arc<Alphabet>, radius: usize, table: Vec<Sym>) -> Result<Rule> {
        let len = table_len(alphabet.len(), radius)?;
        if table.len() != len {
            return Err(Error::Precondition(format!("table has {} entries, expected {len}", table.len())));
        }
        if table.iter().any(|s| s.index() >= alphabet.len()) {
            return Err(Error::Precondition("table output outside the alphabet".into()));
        }
        Ok(Rule {
            alphabet,
            radius,
            table,
            name: name.into(),
        })
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alphabet
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn width(&self) -> usize {
        2 * self.radius + 1
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Rule {
        self.name = name.into();
        self
    }

    pub fn table(&self) -> &[Sym] {
        &self.table
    }

    #[inline]
    pub fn index_of(&self, nb: &[Sym]) -> usize {
        let k = self.alphabet.len();
        nb.iter().fold(0usize, |acc, s| acc * k + s.index())
    }

    /// Local map on a neighbourhood of exactly `2r+1` cells.
    #[inline]
    pub fn apply(&self, nb: &[Sym]) -> Sym {
        debug_assert_eq!(nb.len(), self.width());
        self.table[self.index_of(nb)]
    }

    /// The same global map described with a larger radius (outer cells ignored).
    pub fn widen(&self, radius: usize) -> Result<Rule> {
        if radius < self.radius {
            return Err(Error::Precondition(format!(
                "cannot narrow radius {} to {radius}",
                self.radius
            )));
        }
        if radius == self.radius {
            return Ok(self.clone());
        }
        let pad = radius - self.radius;
        Rule::from_fn(self.name.clone(), self.alphabet.clone(), radius, |nb| {
            self.apply(&nb[pad..nb.len() - pad])
        })
    }

    /// Sliding block code on a finite word: output length `|w| - 2r`.
    pub fn block_map(&self, word: &[Sym]) -> Result<Vec<Sym>> {
        let width = self.width();
        if word.len() < width {
            return Err(Error::WordTooShort {
                len: word.len(),
                need: width,
            });
        }
        let mut out = Vec::with_capacity(word.len() + 1 - width);
        self.block_map_into(word, &mut out);
        Ok(out)
    }

    /// Unchecked variant used in enumeration loops; `word.len() >= 2r+1`.
    pub fn block_map_into(&self, word: &[Sym], out: &mut Vec<Sym>) {
        let width = self.width();
        let k = self.alphabet.len();
        let modulus = self.table.len() / k;
        out.clear();
        let mut idx = 0usize;
        for (i, s) in word.iter().enumerate() {
            idx = (idx % modulus) * k + s.index();
            if i + 1 >= width {
                out.push(self.table[idx]);
            }
        }
    }

    /// `t`-fold block map.
    pub fn iterate_block(&self, word: &[Sym], t: usize) -> Result<Vec<Sym>> {
        let need = 2 * self.radius * t + 1;
        if t > 0 && word.len() < need {
            return Err(Error::WordTooShort {
                len: word.len(),
                need,
            });
        }
        let mut cur = word.to_vec();
        let mut next = Vec::with_capacity(word.len());
        for _ in 0..t {
            self.block_map_into(&cur, &mut next);
            std::mem::swap(&mut cur, &mut next);
        }
        Ok(cur)
    }

    /// True iff every neighbourhood containing `z` maps to `z`.
    pub fn has_spreading_state(&self, z: Sym) -> Result<bool> {
        if z.index() >= self.alphabet.len() {
            return Err(Error::UnknownSymbol(format!("#{}", z.0)));
        }
        let k = self.alphabet.len();
        let width = self.width();
        Ok(self.table.iter().enumerate().all(|(mut idx, &out)| {
            let mut contains = false;
            for _ in 0..width {
                if idx % k == z.index() {
                    contains = true;
                    break;
                }
                idx /= k;
            }
            !contains || out == z
        }))
    }

    /// Spreading states of the rule, in alphabet order.
    pub fn spreading_states(&self) -> Vec<Sym> {
        self.alphabet
            .syms()
            .filter(|&z| self.has_spreading_state(z).unwrap_or(false))
            .collect()
    }

    pub fn same_alphabet(&self, other: &Alphabet) -> Result<()> {
        if *self.alphabet != *other {
            return Err(Error::AlphabetMismatch(format!("rule over {} applied to {}", self.alphabet, other)));
        }
        Ok(())
    }

    // ----------------------------------------------------------------- builtins

    /// `f(a,b,c) = c` over `{a,b}`: every letter moves one cell to the left.
    pub fn shift() -> Rule {
        let a = Arc::new(Alphabet::new(["a", "b"]).unwrap());
        Rule::from_fn("shift", a, 1, |nb| nb[2]).unwrap()
    }

    pub fn identity() -> Rule {
        let a = Arc::new(Alphabet::new(["a", "b"]).unwrap());
        Rule::from_fn("identity", a, 1, |nb| nb[1]).unwrap()
    }

    /// `f = min` over `{0,1}`; `0` is spreading.
    pub fn min() -> Rule {
        let a = Arc::new(Alphabet::new(["0", "1"]).unwrap());
        Rule::from_fn("min", a, 1, |nb| *nb.iter().min().unwrap()).unwrap()
    }

    /// Radius-1 binary rule in Wolfram numbering.
    pub fn elementary(code: u8) -> Rule {
        let a = Arc::new(Alphabet::new(["0", "1"]).unwrap());
        Rule::from_fn(format!("elementary:{code}"), a, 1, |nb| {
            let bit = nb[0].index() * 4 + nb[1].index() * 2 + nb[2].index();
            Sym(((code >> bit) & 1) as u16)
        })
        .unwrap()
    }

    /// Loads `shift`, `identity`, `min`, `elementary:<n>` or `fs`.
    pub fn builtin(name: &str) -> Result<Rule> {
        match name {
            "shift" => Ok(Rule::shift()),
            "identity" => Ok(Rule::identity()),
            "min" => Ok(Rule::min()),
            "fs" => Ok(crate::firing_squad::fs_rule().clone()),
            _ => {
                if let Some(code) = name.strip_prefix("elementary:") {
                    let code: u8 = code.parse().map_err(|_| Error::UnknownRule(name.to_string()))?;
                    Ok(Rule::elementary(code))
                } else {
                    Err(Error::UnknownRule(name.to_string()))
                }
            }
        }
    }

    // ------------------------------------------------------------- file format

    /// Serialises to the text rule format. The most frequent output becomes the
    /// `default:` line; only tuples with a different output are listed.
    pub fn to_rule_file(&self) -> String {
        let a = &self.alphabet;
        let mut s = String::new();
        let _ = writeln!(s, "alphabet: {}", a.names().join(" "));
        let _ = writeln!(s, "radius: {}", self.radius);
        if let Some(g) = a.glyphs() {
            let parts: Vec<String> = a.names().iter().zip(g).map(|(n, c)| format!("{n}={c}")).collect();
            let _ = writeln!(s, "glyphs: {}", parts.join(" "));
        }
        let mut counts = vec![0usize; a.len()];
        for o in &self.table {
            counts[o.index()] += 1;
        }
        let default = Sym(counts.iter().enumerate().max_by_key(|&(i, c)| (*c, std::cmp::Reverse(i))).unwrap().0 as u16);
        let _ = writeln!(s, "map:");
        let k = a.len();
        let width = self.width();
        let mut nb = vec![0usize; width];
        for (idx, &out) in self.table.iter().enumerate() {
            if out != default {
                let mut x = idx;
                for slot in nb.iter_mut().rev() {
                    *slot = x % k;
                    x /= k;
                }
                let names: Vec<&str> = nb.iter().map(|&i| a.names()[i].as_str()).collect();
                let _ = writeln!(s, "{} -> {}", names.join(" "), a.name(out));
            }
        }
        let _ = writeln!(s, "default: {}", a.name(default));
        s
    }

    pub fn parse_rule_file(name: impl Into<String>, text: &str) -> Result<Rule> {
        let perr = |line: usize, msg: &str| Error::Parse {
            line,
            msg: msg.to_string(),
        };
        let mut alphabet: Option<Alphabet> = None;
        let mut radius: Option<usize> = None;
        let mut glyphs: Option<Vec<(String, char)>> = None;
        let mut entries: Vec<(usize, Vec<String>, String)> = Vec::new();
        let mut default: Option<(usize, String)> = None;
        let mut in_map = false;
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with("//") || line.starts_with(";;") {
                continue;
            }
            if let Some(rest) = line.strip_prefix("alphabet:") {
                alphabet = Some(Alphabet::new(rest.split_whitespace()).map_err(|e| perr(line_no, &e.to_string()))?);
            } else if let Some(rest) = line.strip_prefix("radius:") {
                radius = Some(rest.trim().parse().map_err(|_| perr(line_no, "bad radius"))?);
            } else if let Some(rest) = line.strip_prefix("glyphs:") {
                let mut g = Vec::new();
                for item in rest.split_whitespace() {
                    let (n, c) = item.rsplit_once('=').ok_or_else(|| perr(line_no, "glyph entry must be name=char"))?;
                    let mut chars = c.chars();
                    let ch = chars.next().ok_or_else(|| perr(line_no, "empty glyph"))?;
                    if chars.next().is_some() {
                        return Err(perr(line_no, "glyph must be one character"));
                    }
                    g.push((n.to_string(), ch));
                }
                glyphs = Some(g);
            } else if line == "map:" {
                in_map = true;
            } else if let Some(rest) = line.strip_prefix("default:") {
                default = Some((line_no, rest.trim().to_string()));
            } else if in_map {
                let (lhs, rhs) = line.split_once("->").ok_or_else(|| perr(line_no, "expected `... -> s`"))?;
                entries.push((
                    line_no,
                    lhs.split_whitespace().map(str::to_string).collect(),
                    rhs.trim().to_string(),
                ));
            } else {
                return Err(perr(line_no, "unexpected line"));
            }
        }
        let mut alphabet = alphabet.ok_or_else(|| perr(0, "missing `alphabet:` line"))?;
        let radius = radius.ok_or_else(|| perr(0, "missing `radius:` line"))?;
        if let Some(g) = glyphs {
            let map: HashMap<String, char> = g.into_iter().collect();
            let mut v = Vec::with_capacity(alphabet.len());
            for n in alphabet.names() {
                v.push(*map.get(n).ok_or_else(|| perr(0, &format!("no glyph for `{n}`")))?);
            }
            alphabet = alphabet.with_glyphs(v).map_err(|e| perr(0, &e.to_string()))?;
        }
        let k = alphabet.len();
        let len = table_len(k, radius)?;
        let mut table: Vec<Option<Sym>> = vec![None; len];
        let width = 2 * radius + 1;
        for (line_no, lhs, rhs) in entries {
            if lhs.len() != width {
                return Err(perr(line_no, &format!("expected {width} input symbols")));
            }
            let mut idx = 0usize;
            for n in &lhs {
                let s = alphabet.sym(n).ok_or_else(|| perr(line_no, &format!("unknown symbol `{n}`")))?;
                idx = idx * k + s.index();
            }
            let out = alphabet.sym(&rhs).ok_or_else(|| perr(line_no, &format!("unknown symbol `{rhs}`")))?;
            if let Some(prev) = table[idx] {
                if prev != out {
                    return Err(perr(line_no, "conflicting entries for the same tuple"));
                }
            }
            table[idx] = Some(out);
        }
        let default = match default {
            Some((line_no, d)) => Some(alphabet.sym(&d).ok_or_else(|| perr(line_no, &format!("unknown symbol `{d}`")))?),
            None => None,
        };
        let table: Vec<Sym> = match default {
            Some(d) => table.into_iter().map(|o| o.unwrap_or(d)).collect(),
            None => table
                .into_iter()
                .collect::<Option<Vec<_>>>()
                .ok_or_else(|| perr(0, "map does not cover every tuple and no `default:` is given"))?,
        };
        Rule::from_table(name, Arc::new(alphabet), radius, table)
    }
}

/// Product alphabet `A x B` with names `(a,b)`, first component most significant.
pub fn pair_alphabet(a: &Alphabet, b: &Alphabet) -> Result<Alphabet> {
    let mut names = Vec::with_capacity(a.len() * b.len());
    for x in a.names() {
        for y in b.names() {
            names.push(format!("({x},{y})"));
        }
    }
    Alphabet::new(names)
}

/// Componentwise product of two rules over the pair alphabet; radii are
/// reconciled by widening the smaller one.
pub fn product_rule(f: &Rule, g: &Rule) -> Result<Rule> {
    let r = f.radius.max(g.radius);
    let f = f.widen(r)?;
    let g = g.widen(r)?;
    let kb = g.alphabet.len();
    let alphabet = Arc::new(pair_alphabet(&f.alphabet, &g.alphabet)?);
    let width = 2 * r + 1;
    let mut left = vec![Sym(0); width];
    let mut right = vec![Sym(0); width];
    Rule::from_fn(format!("{}x{}", f.name, g.name), alphabet, r, |nb| {
        for (i, s) in nb.iter().enumerate() {
            left[i] = Sym((s.index() / kb) as u16);
            right[i] = Sym((s.index() % kb) as u16);
        }
        Sym((f.apply(&left).index() * kb + g.apply(&right).index()) as u16)
    })
}

/// True iff `sub` is closed under `big` and `big` restricted to it coincides
/// with `small` transported through `embedding` (small symbol -> big symbol).
pub fn check_sub_automaton(big: &Rule, sub: &[Sym], small: &Rule, embedding: &BTreeMap<Sym, Sym>) -> Result<bool> {
    let image: HashSet<Sym> = embedding.values().copied().collect();
    if image.len() != embedding.len() {
        return Err(Error::Precondition("embedding is not injective".into()));
    }
    if embedding.len() != small.alphabet.len() || small.alphabet.syms().any(|s| !embedding.contains_key(&s)) {
        return Err(Error::Precondition("embedding must be defined on the whole small alphabet".into()));
    }
    let sub_set: HashSet<Sym> = sub.iter().copied().collect();
    if !image.is_subset(&sub_set) {
        return Err(Error::Precondition("embedding image is not inside the sub-alphabet".into()));
    }
    if sub_set.iter().any(|s| s.index() >= big.alphabet.len()) {
        return Err(Error::UnknownSymbol("sub-alphabet symbol outside the big alphabet".into()));
    }
    let onto = image == sub_set;
    let r = big.radius.max(small.radius);
    let big = big.widen(r)?;
    let small = small.widen(r)?;
    let width = 2 * r + 1;
    let sub_list: Vec<Sym> = {
        let mut v: Vec<Sym> = sub_set.iter().copied().collect();
        v.sort();
        v
    };
    let inverse: HashMap<Sym, Sym> = embedding.iter().map(|(&s, &b)| (b, s)).collect();
    let mut digits = vec![0usize; width];
    let mut nb = vec![Sym(0); width];
    let mut small_nb = vec![Sym(0); width];
    loop {
        for i in 0..width {
            nb[i] = sub_list[digits[i]];
        }
        let out = big.apply(&nb);
        if !sub_set.contains(&out) {
            return Ok(false);
        }
        if nb.iter().all(|s| inverse.contains_key(s)) {
            for i in 0..width {
                small_nb[i] = inverse[&nb[i]];
            }
            if embedding[&small.apply(&small_nb)] != out {
                return Ok(false);
            }
        }
        let mut i = width;
        loop {
            if i == 0 {
                return Ok(onto);
            }
            i -= 1;
            digits[i] += 1;
            if digits[i] < sub_list.len() {
                break;
            }
            digits[i] = 0;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(rule: &Rule, s: &str) -> Vec<Sym> {
        rule.alphabet().parse_word(s).unwrap()
    }

    #[test]
    fn block_map_examples() {
        let min = Rule::min();
        assert_eq!(min.block_map(&w(&min, "11011")).unwrap(), w(&min, "000"));
        let id = Rule::identity();
        assert_eq!(id.block_map(&w(&id, "abb")).unwrap(), w(&id, "b"));
        let sh = Rule::shift();
        assert_eq!(sh.block_map(&w(&sh, "abb")).unwrap(), w(&sh, "b"));
        assert_eq!(sh.block_map(&w(&sh, "aab")).unwrap(), w(&sh, "b"));
        assert!(matches!(min.block_map(&w(&min, "11")), Err(Error::WordTooShort { .. })));
    }

    #[test]
    fn iterate_examples() {
        let min = Rule::min();
        assert_eq!(min.iterate_block(&w(&min, "1101"), 0).unwrap(), w(&min, "1101"));
        assert_eq!(min.iterate_block(&w(&min, "11111"), 2).unwrap(), w(&min, "1"));
        assert_eq!(min.iterate_block(&w(&min, "11011"), 2).unwrap(), w(&min, "0"));
        assert!(min.iterate_block(&w(&min, "1111"), 2).is_err());
    }

    #[test]
    fn spreading_examples() {
        let min = Rule::min();
        assert!(min.has_spreading_state(Sym(0)).unwrap());
        assert!(!min.has_spreading_state(Sym(1)).unwrap());
        assert!(!Rule::shift().has_spreading_state(Sym(0)).unwrap());
        assert!(min.has_spreading_state(Sym(7)).is_err());
    }

    #[test]
    fn elementary_numbering() {
        let r110 = Rule::elementary(110);
        let expect = [0, 1, 1, 1, 0, 1, 1, 0]; // neighbourhoods 000..111
        for (i, e) in expect.iter().enumerate() {
            let nb = [Sym((i >> 2) as u16 & 1), Sym((i >> 1) as u16 & 1), Sym(i as u16 & 1)];
            assert_eq!(r110.apply(&nb), Sym(*e));
        }
    }

    #[test]
    fn product_examples() {
        let p = product_rule(&Rule::shift(), &Rule::identity()).unwrap();
        let a = p.alphabet().clone();
        let nb: Vec<Sym> = ["(a,a)", "(b,b)", "(b,a)"].iter().map(|n| a.sym(n).unwrap()).collect();
        assert_eq!(a.name(p.apply(&nb)), "(b,b)");

        let m = product_rule(&Rule::min(), &Rule::shift()).unwrap();
        let a = m.alphabet().clone();
        let nb: Vec<Sym> = ["(1,a)", "(1,b)", "(0,a)"].iter().map(|n| a.sym(n).unwrap()).collect();
        assert_eq!(a.name(m.apply(&nb)), "(0,a)");

        let ii = product_rule(&Rule::identity(), &Rule::identity()).unwrap();
        assert!(ii.table().iter().enumerate().all(|(i, o)| o.index() == (i / 4) % 4));
    }

    #[test]
    fn sub_automaton_of_min() {
        let min = Rule::min();
        let one = Arc::new(Alphabet::new(["x"]).unwrap());
        let trivial = Rule::from_fn("one", one, 1, |_| Sym(0)).unwrap();
        let emb: BTreeMap<Sym, Sym> = [(Sym(0), Sym(1))].into_iter().collect();
        assert!(check_sub_automaton(&min, &[Sym(1)], &trivial, &emb).unwrap());
        let emb0: BTreeMap<Sym, Sym> = [(Sym(0), Sym(0))].into_iter().collect();
        assert!(check_sub_automaton(&min, &[Sym(0)], &trivial, &emb0).unwrap());
        // {1,0} is closed but min is not the trivial rule on it
        assert!(!check_sub_automaton(&min, &[Sym(0), Sym(1)], &trivial, &emb).unwrap());
    }

    #[test]
    fn non_injective_embedding_rejected() {
        let min = Rule::min();
        let emb: BTreeMap<Sym, Sym> = [(Sym(0), Sym(1)), (Sym(1), Sym(1))].into_iter().collect();
        assert!(matches!(
            check_sub_automaton(&min, &[Sym(0), Sym(1)], &min, &emb),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn rule_file_round_trip() {
        for r in [Rule::min(), Rule::elementary(110), Rule::shift()] {
            let text = r.to_rule_file();
            let back = Rule::parse_rule_file(r.name(), &text).unwrap();
            assert_eq!(back, r);
        }
    }

    #[test]
    fn rule_file_requires_coverage() {
        let text = "alphabet: 0 1\nradius: 0\nmap:\n0 -> 1\n";
        assert!(matches!(Rule::parse_rule_file("x", text), Err(Error::Parse { .. })));
        let ok = "alphabet: 0 1\nradius: 0\nmap:\n0 -> 1\ndefault: 0\n";
        let r = Rule::parse_rule_file("x", ok).unwrap();
        assert_eq!(r.table(), &[Sym(1), Sym(0)]);
    }

    #[test]
    fn widen_preserves_map() {
        let r = Rule::elementary(30);
        let w2 = r.widen(2).unwrap();
        let word = w(&r, "0110100111");
        let a = r.block_map(&word).unwrap();
        let b = w2.block_map(&word).unwrap();
        assert_eq!(&a[1..a.len() - 1], &b[..]);
    }
}
