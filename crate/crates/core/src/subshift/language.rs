use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;

use crate::alphabet::{Alphabet, Sym};
use crate::dfa::Dfa;
use crate::error::{Error, Result};
use crate::rule::Rule;

use super::{count_words, for_each_word, Budget};

/// A set of words of one length, sorted lexicographically in alphabet
/// declaration order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LanguageSample {
    pub alphabet: Arc<Alphabet>,
    pub n: usize,
    pub t: Option<usize>,
    pub rule: String,
    pub words: BTreeSet<Vec<Sym>>,
}

impl LanguageSample {
    pub fn new(
        alphabet: Arc<Alphabet>,
        n: usize,
        t: Option<usize>,
        rule: impl Into<String>,
        words: impl IntoIterator<Item = Vec<Sym>>,
    ) -> Result<LanguageSample> {
        let words: BTreeSet<Vec<Sym>> = words.into_iter().collect();
        if words.iter().any(|w| w.len() != n) {
            return Err(Error::Precondition(format!("all words of the sample must have length {n}")));
        }
        let k = alphabet.len();
        if words.iter().flatten().any(|s| s.index() >= k) {
            return Err(Error::UnknownSymbol("letter outside the alphabet".into()));
        }
        Ok(LanguageSample {
            alphabet,
            n,
            t,
            rule: rule.into(),
            words,
        })
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn contains(&self, w: &[Sym]) -> bool {
        self.words.contains(w)
    }

    /// Membership of a word literal.
    pub fn contains_text(&self, w: &str) -> Result<bool> {
        Ok(self.contains(&self.alphabet.parse_word(w)?))
    }

    pub fn is_subset(&self, other: &LanguageSample) -> bool {
        self.words.is_subset(&other.words)
    }

    /// Header `n=<n> t=<t> rule=<id>` and one word per line.
    pub fn to_text(&self) -> String {
        let t = self.t.map_or_else(|| "-".to_string(), |t| t.to_string());
        let mut s = format!("n={} t={} rule={}\n", self.n, t, self.rule);
        for w in &self.words {
            s.push_str(&self.alphabet.format_word(w));
            s.push('\n');
        }
        s
    }

    pub fn parse(alphabet: Arc<Alphabet>, text: &str) -> Result<LanguageSample> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (_, header) = lines.next().ok_or(Error::Parse {
            line: 1,
            msg: "missing header".into(),
        })?;
        let mut n = None;
        let mut t = None;
        let mut rule = String::new();
        for field in header.split_whitespace() {
            let (key, value) = field.split_once('=').ok_or(Error::Parse {
                line: 1,
                msg: format!("malformed header field `{field}`"),
            })?;
            let bad = || Error::Parse {
                line: 1,
                msg: format!("bad value in `{field}`"),
            };
            match key {
                "n" => n = Some(value.parse::<usize>().map_err(|_| bad())?),
                "t" if value == "-" => t = None,
                "t" => t = Some(value.parse::<usize>().map_err(|_| bad())?),
                "rule" => rule = value.to_string(),
                _ => return Err(bad()),
            }
        }
        let n = n.ok_or(Error::Parse {
            line: 1,
            msg: "header lacks n=".into(),
        })?;
        let mut words = Vec::new();
        for (i, line) in lines {
            let w = alphabet.parse_word(line).map_err(|e| Error::Parse {
                line: i + 1,
                msg: e.to_string(),
            })?;
            words.push(w);
        }
        LanguageSample::new(alphabet, n, t, rule, words)
    }
}

impl fmt::Display for LanguageSample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// How to compute a finite-time image language.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Strategy {
    /// Apply the block map to every word of the dependence cone.
    Enumerate,
    /// Push the automaton of all cone words through the block map.
    Automaton,
    /// Enumerate when the cone fits the enumeration budget, else automata.
    Auto,
}

/// `{ f^t(u) : u in A^(n+2rt) }`, choosing the strategy automatically.
pub fn image_language(rule: &Rule, n: usize, t: usize, budget: &Budget) -> Result<LanguageSample> {
    image_language_with(rule, n, t, Strategy::Auto, budget)
}

pub fn image_language_with(rule: &Rule, n: usize, t: usize, strategy: Strategy, budget: &Budget) -> Result<LanguageSample> {
    if n == 0 {
        return Err(Error::Precondition("word length must be at least 1".into()));
    }
    let k = rule.alphabet().len();
    let len = n + 2 * rule.radius() * t;
    let strategy = match strategy {
        Strategy::Auto if count_words(k, len) <= budget.max_enumeration => Strategy::Enumerate,
        Strategy::Auto => Strategy::Automaton,
        s => s,
    };
    let words = match strategy {
        Strategy::Enumerate => enumerate_image(rule, len, t, budget)?,
        _ => automaton_image(rule, len, t, budget)?,
    };
    LanguageSample::new(rule.alphabet().clone(), n, Some(t), rule.name(), words)
}

fn enumerate_image(rule: &Rule, len: usize, t: usize, budget: &Budget) -> Result<Vec<Vec<Sym>>> {
    let k = rule.alphabet().len();
    budget.check_enumeration("cone words", count_words(k, len))?;
    let mut prefixes = Vec::new();
    for_each_word(k, len.min(2), &[], |p| prefixes.push(p.to_vec()));
    let parts: Vec<BTreeSet<Vec<Sym>>> = prefixes
        .par_iter()
        .map(|p| {
            let mut seen = BTreeSet::new();
            let mut cur = Vec::new();
            let mut next = Vec::new();
            for_each_word(k, len, p, |u| {
                cur.clear();
                cur.extend_from_slice(u);
                for _ in 0..t {
                    rule.block_map_into(&cur, &mut next);
                    std::mem::swap(&mut cur, &mut next);
                }
                if !seen.contains(&cur) {
                    seen.insert(cur.clone());
                }
            });
            seen
        })
        .collect();
    Ok(parts.into_iter().flatten().collect::<BTreeSet<_>>().into_iter().collect())
}

fn automaton_image(rule: &Rule, len: usize, t: usize, budget: &Budget) -> Result<Vec<Vec<Sym>>> {
    let k = rule.alphabet().len();
    let mut d = Dfa::all_of_length(k, len, None);
    for _ in 0..t {
        d = d.image(rule, budget.max_states)?;
    }
    let limit = budget.max_enumeration.min(usize::MAX as u128) as usize;
    d.words(limit)
}

/// The chain `L_n(0) ⊇ L_n(1) ⊇ ... ⊇ L_n(t_max)` of image languages.
#[derive(Clone, Debug)]
pub struct LimitReport {
    pub samples: Vec<LanguageSample>,
    /// Largest `t` with `L_n(t) ≠ L_n(t-1)`, if any.
    pub last_decrease: Option<usize>,
    /// Number of final steps over which the chain stayed constant.
    pub stable_for: usize,
}

impl LimitReport {
    pub fn last(&self) -> &LanguageSample {
        self.samples.last().expect("chain is never empty")
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for sample in &self.samples {
            s.push_str(&format!("t={} words={}\n", sample.t.unwrap_or(0), sample.len()));
        }
        let last = self.last_decrease.map_or_else(|| "none".to_string(), |t| t.to_string());
        s.push_str(&format!("last_decrease={last}\nstable_for={}\n", self.stable_for));
        s
    }
}

pub fn limit_language(rule: &Rule, n: usize, t_max: usize, budget: &Budget) -> Result<LimitReport> {
    if t_max == 0 {
        return Err(Error::Precondition("t_max must be at least 1".into()));
    }
    let mut samples = Vec::with_capacity(t_max + 1);
    for t in 0..=t_max {
        samples.push(image_language(rule, n, t, budget)?);
    }
    let last_decrease = (1..=t_max).rev().find(|&t| samples[t].words != samples[t - 1].words);
    let stable_for = t_max - last_decrease.unwrap_or(0);
    Ok(LimitReport {
        samples,
        last_decrease,
        stable_for,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample(rule: &Rule, n: usize, t: usize, s: Strategy) -> LanguageSample {
        image_language_with(rule, n, t, s, &Budget::default()).unwrap()
    }

    #[test]
    fn min_image_drops_isolated_one_gap() {
        let min = Rule::min();
        for t in 1..=4 {
            let l = sample(&min, 3, t, Strategy::Enumerate);
            assert!(!l.contains_text("101").unwrap(), "t={t}");
            assert!(l.contains_text("010").unwrap(), "t={t}");
        }
        assert_eq!(sample(&min, 3, 0, Strategy::Enumerate).len(), 8);
    }

    #[test]
    fn min_image_at_time_one() {
        // brute force over the 32 words of length 5
        let min = Rule::min();
        let mut want = BTreeSet::new();
        for_each_word(2, 5, &[], |u| {
            want.insert(min.block_map(u).unwrap());
        });
        assert_eq!(sample(&min, 3, 1, Strategy::Enumerate).words, want);
        assert_eq!(want.len(), 7);
    }

    #[test]
    fn strategies_agree() {
        for rule in [Rule::min(), Rule::shift(), Rule::elementary(110), Rule::elementary(18), Rule::elementary(54)] {
            for n in 1..=3 {
                for t in 0..=3 {
                    assert_eq!(
                        sample(&rule, n, t, Strategy::Enumerate),
                        sample(&rule, n, t, Strategy::Automaton),
                        "{} n={n} t={t}",
                        rule.name()
                    );
                }
            }
        }
    }

    #[test]
    fn shift_is_onto() {
        assert_eq!(sample(&Rule::shift(), 2, 3, Strategy::Auto).len(), 4);
    }

    #[test]
    fn limit_chain_is_monotone() {
        let report = limit_language(&Rule::elementary(110), 3, 4, &Budget::default()).unwrap();
        for w in report.samples.windows(2) {
            assert!(w[1].is_subset(&w[0]));
        }
        let min = limit_language(&Rule::min(), 3, 4, &Budget::default()).unwrap();
        assert_eq!(min.last_decrease, Some(1));
        assert_eq!(min.stable_for, 3);
        let shift = limit_language(&Rule::shift(), 2, 3, &Budget::default()).unwrap();
        assert_eq!(shift.last_decrease, None);
        assert!(shift.to_text().contains("last_decrease=none"));
    }

    #[test]
    fn text_round_trip() {
        let min = Rule::min();
        let l = sample(&min, 3, 2, Strategy::Enumerate);
        let text = l.to_text();
        assert!(text.starts_with("n=3 t=2 rule=min\n"));
        assert_eq!(LanguageSample::parse(min.alphabet().clone(), &text).unwrap(), l);
        assert!(LanguageSample::parse(min.alphabet().clone(), "n=2\n000\n").is_err());
    }
}
