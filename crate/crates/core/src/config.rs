//! Finitely presented bi-infinite configurations.

use std::fmt;
use std::sync::Arc;

use crate::alphabet::{Alphabet, Sym};
use crate::error::{Error, Result};
use crate::rule::Rule;

/// A spatially periodic configuration `ω(p)ω`, stored in canonical form: the
/// lexicographically least rotation of the primitive root of `p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PeriodicConfig {
    alphabet: Arc<Alphabet>,
    period: Vec<Sym>,
}

/// Smallest `d` such that `w` is a power of `w[..d]`.
pub fn primitive_root_len(w: &[Sym]) -> usize {
    let n = w.len();
    (1..=n)
        .find(|&d| n % d == 0 && (d..n).all(|i| w[i] == w[i - d]))
        .unwrap_or(n)
}

/// Least rotation of a word (Booth's algorithm would do; periods here are short).
pub fn least_rotation(w: &[Sym]) -> Vec<Sym> {
    let n = w.len();
    (0..n)
        .map(|k| w[k..].iter().chain(&w[..k]).copied().collect::<Vec<_>>())
        .min()
        .unwrap_or_default()
}

pub fn rotate(w: &[Sym], k: usize) -> Vec<Sym> {
    if w.is_empty() {
        return Vec::new();
    }
    let k = k % w.len();
    w[k..].iter().chain(&w[..k]).copied().collect()
}

/// Image of the periodic configuration with period `p`, keeping the alignment:
/// output cell `i` is the image of input cell `i`.
pub fn apply_periodic_raw(rule: &Rule, p: &[Sym]) -> Vec<Sym> {
    let n = p.len();
    let r = rule.radius();
    let mut ext = Vec::with_capacity(n + 2 * r);
    for i in 0..n + 2 * r {
        ext.push(p[(i + n * (r / n + 1) - r) % n]);
    }
    let mut out = Vec::with_capacity(n);
    rule.block_map_into(&ext, &mut out);
    out
}

impl PeriodicConfig {
    pub fn new(alphabet: Arc<Alphabet>, period: Vec<Sym>) -> Result<PeriodicConfig> {
        if period.is_empty() {
            return Err(Error::EmptyPeriod);
        }
        if period.iter().any(|s| s.index() >= alphabet.len()) {
            return Err(Error::UnknownSymbol("period letter outside the alphabet".into()));
        }
        let root = primitive_root_len(&period);
        let period = least_rotation(&period[..root]);
        Ok(PeriodicConfig { alphabet, period })
    }

    pub fn parse(alphabet: Arc<Alphabet>, text: &str) -> Result<PeriodicConfig> {
        let p = alphabet.parse_word(text)?;
        PeriodicConfig::new(alphabet, p)
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alphabet
    }

    pub fn period(&self) -> &[Sym] {
        &self.period
    }

    pub fn apply(&self, rule: &Rule) -> Result<PeriodicConfig> {
        rule.same_alphabet(&self.alphabet)?;
        PeriodicConfig::new(self.alphabet.clone(), apply_periodic_raw(rule, &self.period))
    }
}

impl fmt::Display for PeriodicConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ω({})ω", self.alphabet.format_word(&self.period))
    }
}

pub fn apply_periodic(rule: &Rule, c: &PeriodicConfig) -> Result<PeriodicConfig> {
    c.apply(rule)
}

/// `ω(left) · center · (right)ω` with the center starting at cell `origin`.
/// The left period ends at cell `origin - 1`, the right period starts right
/// after the center.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PresentedConfig {
    pub alphabet: Arc<Alphabet>,
    pub left: Vec<Sym>,
    pub center: Vec<Sym>,
    pub right: Vec<Sym>,
    pub origin: i64,
}

impl PresentedConfig {
    pub fn new(alphabet: Arc<Alphabet>, left: Vec<Sym>, center: Vec<Sym>, right: Vec<Sym>, origin: i64) -> Result<Self> {
        if left.is_empty() || right.is_empty() {
            return Err(Error::EmptyPeriod);
        }
        let k = alphabet.len();
        if left.iter().chain(&center).chain(&right).any(|s| s.index() >= k) {
            return Err(Error::UnknownSymbol("letter outside the alphabet".into()));
        }
        Ok(PresentedConfig {
            alphabet,
            left,
            center,
            right,
            origin,
        })
    }

    /// `ω(p)ω` with cell 0 holding `p[0]`.
    pub fn periodic(alphabet: Arc<Alphabet>, period: Vec<Sym>) -> Result<Self> {
        PresentedConfig::new(alphabet, period.clone(), Vec::new(), period, 0)
    }

    /// `ω(bg) · center · (bg)ω`.
    pub fn finite(alphabet: Arc<Alphabet>, background: Sym, center: Vec<Sym>) -> Result<Self> {
        PresentedConfig::new(alphabet, vec![background], center, vec![background], 0)
    }

    /// Parses `ω(l)ω`-style literals: `ω(L) C (R)ω`, where either tail marker
    /// may also be written `w(...)`/`(...)w`, and a bare `ω(P)ω` is periodic.
    pub fn parse(alphabet: Arc<Alphabet>, text: &str) -> Result<Self> {
        let t = text.trim().replace("w(", "ω(").replace(")w", ")ω");
        let perr = |m: &str| Error::Parse { line: 1, msg: m.to_string() };
        let body = t.strip_prefix("ω(").ok_or_else(|| perr("expected leading ω("))?;
        let close = body.find(')').ok_or_else(|| perr("unclosed ω("))?;
        let left = alphabet.parse_word(&body[..close])?;
        let rest = &body[close + 1..];
        if rest.trim() == "ω" {
            return PresentedConfig::periodic(alphabet, left);
        }
        let open = rest.rfind('(').ok_or_else(|| perr("expected trailing (...)ω"))?;
        let tail = rest[open + 1..].strip_suffix(")ω").ok_or_else(|| perr("expected trailing )ω"))?;
        let center = alphabet.parse_word(&rest[..open])?;
        let right = alphabet.parse_word(tail)?;
        PresentedConfig::new(alphabet, left, center, right, 0)
    }

    pub fn end(&self) -> i64 {
        self.origin + self.center.len() as i64
    }

    pub fn cell(&self, i: i64) -> Sym {
        if i < self.origin {
            let n = self.left.len() as i64;
            let back = self.origin - 1 - i; // 0 = last letter of left
            self.left[(n - 1 - back.rem_euclid(n)) as usize]
        } else if i < self.end() {
            self.center[(i - self.origin) as usize]
        } else {
            let n = self.right.len() as i64;
            self.right[(i - self.end()).rem_euclid(n) as usize]
        }
    }

    pub fn window(&self, from: i64, to: i64) -> Vec<Sym> {
        (from..to).map(|i| self.cell(i)).collect()
    }

    /// Image under `rule`. The center grows by `radius` cells on each side;
    /// the tails are replaced by the images of their periodic continuations.
    pub fn apply(&self, rule: &Rule) -> Result<PresentedConfig> {
        rule.same_alphabet(&self.alphabet)?;
        let r = rule.radius() as i64;
        let from = self.origin - r;
        let to = self.end() + r;
        let ext = self.window(from - r, to + r);
        let center = rule.block_map(&ext)?;
        // left tail: periodic continuation aligned so its last letter sits at `from - 1`
        let nl = self.left.len() as i64;
        let left_period: Vec<Sym> = (from - nl..from).map(|i| self.cell_left_periodic(i)).collect();
        let left_img = image_aligned(rule, &left_period);
        let nr = self.right.len() as i64;
        let right_period: Vec<Sym> = (to..to + nr).map(|i| self.cell_right_periodic(i)).collect();
        let right_img = image_aligned(rule, &right_period);
        Ok(PresentedConfig {
            alphabet: self.alphabet.clone(),
            left: left_img,
            center,
            right: right_img,
            origin: from,
        })
    }

    fn cell_left_periodic(&self, i: i64) -> Sym {
        let n = self.left.len() as i64;
        let back = self.origin - 1 - i;
        self.left[(n - 1 - back.rem_euclid(n)) as usize]
    }

    fn cell_right_periodic(&self, i: i64) -> Sym {
        let n = self.right.len() as i64;
        self.right[(i - self.end()).rem_euclid(n) as usize]
    }

    /// Moves center letters that continue a tail period back into the tail.
    pub fn compact(&self) -> PresentedConfig {
        let mut c = self.clone();
        while !c.center.is_empty() && c.center[0] == c.left[0] {
            c.left.rotate_left(1);
            c.center.remove(0);
            c.origin += 1;
        }
        while let Some(&last) = c.center.last() {
            if last != *c.right.last().unwrap() {
                break;
            }
            c.right.rotate_right(1);
            c.center.pop();
        }
        c
    }

    /// Whether the two configurations agree on cells `[from, to)`.
    pub fn agrees_with(&self, other: &PresentedConfig, from: i64, to: i64) -> bool {
        (from..to).all(|i| self.cell(i) == other.cell(i))
    }

    /// The configuration as a periodic one, up to translation, if it is
    /// spatially periodic.
    pub fn as_periodic(&self) -> Option<PeriodicConfig> {
        let (a, b) = (self.left.len(), self.right.len());
        let l = (a / gcd(a, b) * b) as i64;
        let from = self.origin - l;
        if !(from..self.end()).all(|i| self.cell(i) == self.cell(i + l)) {
            return None;
        }
        PeriodicConfig::new(self.alphabet.clone(), self.window(self.origin, self.origin + l)).ok()
    }

    /// True iff every cell of the configuration equals `s`.
    pub fn is_uniform(&self, s: Sym) -> bool {
        self.left.iter().chain(&self.center).chain(&self.right).all(|&x| x == s)
    }

    pub fn contains(&self, s: Sym) -> bool {
        self.left.iter().chain(&self.center).chain(&self.right).any(|&x| x == s)
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn image_aligned(rule: &Rule, period: &[Sym]) -> Vec<Sym> {
    apply_periodic_raw(rule, period)
}

impl fmt::Display for PresentedConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let a = &self.alphabet;
        write!(
            f,
            "ω({}) {} ({})ω",
            a.format_word(&self.left),
            a.format_word(&self.center),
            a.format_word(&self.right)
        )
    }
}

pub fn apply_presented(rule: &Rule, c: &PresentedConfig) -> Result<PresentedConfig> {
    c.apply(rule)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pc(rule: &Rule, s: &str) -> PeriodicConfig {
        PeriodicConfig::parse(rule.alphabet().clone(), s).unwrap()
    }

    #[test]
    fn canonical_form() {
        let sh = Rule::shift();
        assert_eq!(pc(&sh, "ba"), pc(&sh, "ab"));
        assert_eq!(pc(&sh, "abab"), pc(&sh, "ab"));
        assert_eq!(pc(&sh, "bab").period().len(), 3);
        assert!(PeriodicConfig::new(sh.alphabet().clone(), vec![]).is_err());
    }

    #[test]
    fn periodic_examples() {
        let sh = Rule::shift();
        assert_eq!(apply_periodic_raw(&sh, &sh.alphabet().parse_word("ab").unwrap()), sh.alphabet().parse_word("ba").unwrap());
        let id = Rule::identity();
        assert_eq!(pc(&id, "ab").apply(&id).unwrap(), pc(&id, "ab"));
        let min = Rule::min();
        assert_eq!(pc(&min, "110").apply(&min).unwrap(), pc(&min, "000"));
        assert!(pc(&sh, "ab").apply(&min).is_err());
    }

    #[test]
    fn presented_examples() {
        let min = Rule::min();
        let a = min.alphabet().clone();
        let c = PresentedConfig::parse(a.clone(), "ω(1) 0 (1)ω").unwrap();
        let d = c.apply(&min).unwrap();
        assert_eq!(d.center, a.parse_word("000").unwrap());
        assert_eq!(d.origin, -1);
        assert_eq!(d.left, vec![Sym(1)]);

        let sh = Rule::shift();
        let a = sh.alphabet().clone();
        let c = PresentedConfig::parse(a.clone(), "ω(a) b (a)ω").unwrap();
        let d = c.apply(&sh).unwrap();
        let b = a.sym("b").unwrap();
        assert_eq!(d.cell(-1), b);
        assert_eq!(d.cell(0), a.sym("a").unwrap());
        assert_eq!(d.compact().center, vec![b]);
        assert_eq!(d.compact().origin, -1);

        let id = Rule::identity();
        let c = PresentedConfig::parse(id.alphabet().clone(), "ω(ab) ba (b)ω").unwrap();
        let d = c.apply(&id).unwrap();
        assert!(c.agrees_with(&d, -20, 20));
    }

    #[test]
    fn presented_tail_alignment() {
        let id = Rule::identity();
        let a = id.alphabet().clone();
        let c = PresentedConfig::new(a.clone(), a.parse_word("ab").unwrap(), vec![], a.parse_word("ab").unwrap(), 0).unwrap();
        // periodic with cell 0 = a
        let expect: Vec<Sym> = (-6..6).map(|i: i64| Sym(i.rem_euclid(2) as u16)).collect();
        assert_eq!(c.window(-6, 6), expect);
    }
}
