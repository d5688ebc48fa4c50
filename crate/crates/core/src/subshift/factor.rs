use std::sync::Arc;

use crate::alphabet::{Alphabet, Sym};
use crate::constructions::DeltaAlphabet;
use crate::error::{Error, Result};

use super::{for_each_word, LanguageSample};

/// A sliding block code `source^(2ρ+1) -> target`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactorMap {
    pub source: Arc<Alphabet>,
    pub target: Arc<Alphabet>,
    pub radius: usize,
    table: Vec<Sym>,
}

impl FactorMap {
    pub fn from_fn(
        source: Arc<Alphabet>,
        target: Arc<Alphabet>,
        radius: usize,
        mut f: impl FnMut(&[Sym]) -> Sym,
    ) -> Result<FactorMap> {
        let width = 2 * radius + 1;
        let mut table = Vec::new();
        let mut bad = false;
        for_each_word(source.len(), width, &[], |w| {
            let out = f(w);
            bad |= out.index() >= target.len();
            table.push(out);
        });
        if bad {
            return Err(Error::UnknownSymbol("factor map output outside the target alphabet".into()));
        }
        Ok(FactorMap {
            source,
            target,
            radius,
            table,
        })
    }

    /// Letter-to-letter map.
    pub fn coloring(source: Arc<Alphabet>, target: Arc<Alphabet>, f: impl Fn(Sym) -> Sym) -> Result<FactorMap> {
        FactorMap::from_fn(source, target, 0, |w| f(w[0]))
    }

    pub fn identity(a: Arc<Alphabet>) -> FactorMap {
        FactorMap::coloring(a.clone(), a, |s| s).expect("identity coloring")
    }

    /// Second projection of a pair alphabet built by
    /// [`crate::rule::pair_alphabet`] from `first` and `second`.
    pub fn second_projection(pairs: Arc<Alphabet>, first: &Alphabet, second: Arc<Alphabet>) -> Result<FactorMap> {
        if pairs.len() != first.len() * second.len() {
            return Err(Error::AlphabetMismatch("pair alphabet size does not match its factors".into()));
        }
        let m = second.len();
        FactorMap::coloring(pairs, second, move |s| Sym((s.index() % m) as u16))
    }

    pub fn is_coloring(&self) -> bool {
        self.radius == 0
    }

    pub fn apply_word(&self, w: &[Sym]) -> Result<Vec<Sym>> {
        let width = 2 * self.radius + 1;
        if w.len() < width {
            return Err(Error::WordTooShort { len: w.len(), need: width });
        }
        let k = self.source.len();
        Ok(w.windows(width)
            .map(|win| self.table[win.iter().fold(0usize, |acc, s| acc * k + s.index())])
            .collect())
    }
}

/// Image of a sample under `phi`; words shrink by `2ρ`.
pub fn apply_factor_language(phi: &FactorMap, s: &LanguageSample) -> Result<LanguageSample> {
    if *phi.source != *s.alphabet {
        return Err(Error::AlphabetMismatch("factor map source differs from the sample alphabet".into()));
    }
    let width = 2 * phi.radius + 1;
    if s.n < width {
        return Err(Error::WordTooShort { len: s.n, need: width });
    }
    let words = s.words.iter().map(|w| phi.apply_word(w)).collect::<Result<Vec<_>>>()?;
    LanguageSample::new(phi.target.clone(), s.n - 2 * phi.radius, s.t, format!("phi({})", s.rule), words)
}

/// Length-`n` words of `A^Z ∪ 0•(A^Z × X)•0` over the alphabet
/// `A ⊔ (A × Q)`: every pure word, and every `0^i q 0^j` with `q` a nonempty
/// block of pairs whose `Q`-projection `in_x` accepts.
pub fn predicted_limit_words(
    da: &DeltaAlphabet,
    zero: Sym,
    n: usize,
    mut in_x: impl FnMut(&[Sym]) -> Result<bool>,
) -> Result<LanguageSample> {
    let na = da.base.len();
    let nq = da.squad.len();
    let mut words: Vec<Vec<Sym>> = Vec::new();
    for_each_word(na, n, &[], |w| words.push(w.iter().map(|&a| da.pure(a)).collect()));
    for i in 0..n {
        for j in 0..n - i {
            let m = n - i - j;
            let mut qs = Vec::new();
            for_each_word(nq, m, &[], |q| qs.push(q.to_vec()));
            for q in qs {
                if !in_x(&q)? {
                    continue;
                }
                let mut blocks = Vec::new();
                for_each_word(na, m, &[], |a| blocks.push(a.to_vec()));
                for a in blocks {
                    let mut w = vec![da.pure(zero); i];
                    w.extend(a.iter().zip(&q).map(|(&a, &q)| da.pair(a, q)));
                    w.extend(std::iter::repeat_n(da.pure(zero), j));
                    words.push(w);
                }
            }
        }
    }
    LanguageSample::new(da.alphabet.clone(), n, None, "predicted", words)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rule::{pair_alphabet, product_rule, Rule};
    use crate::subshift::{image_language, Budget};

    #[test]
    fn identity_coloring_keeps_sample() {
        let min = Rule::min();
        let l = image_language(&min, 3, 1, &Budget::default()).unwrap();
        let phi = FactorMap::identity(min.alphabet().clone());
        assert!(phi.is_coloring());
        assert_eq!(apply_factor_language(&phi, &l).unwrap().words, l.words);
    }

    #[test]
    fn second_projection_of_pairs() {
        let ab = Arc::new(Alphabet::new(["a", "b"]).unwrap());
        let bits = Arc::new(Alphabet::new(["0", "1"]).unwrap());
        let pairs = Arc::new(pair_alphabet(&ab, &bits).unwrap());
        let w = pairs.parse_word("(a,0) (b,1)").unwrap();
        let s = LanguageSample::new(pairs.clone(), 2, None, "x", [w]).unwrap();
        let phi = FactorMap::second_projection(pairs, &ab, bits.clone()).unwrap();
        let out = apply_factor_language(&phi, &s).unwrap();
        assert_eq!(out.words.into_iter().collect::<Vec<_>>(), vec![bits.parse_word("01").unwrap()]);
    }

    #[test]
    fn projection_transports_images() {
        let shift = Rule::shift();
        let min = Rule::min();
        let prod = product_rule(&shift, &min).unwrap();
        let phi = FactorMap::second_projection(prod.alphabet().clone(), shift.alphabet(), min.alphabet().clone()).unwrap();
        let b = Budget::default();
        for n in 1..=3 {
            for t in 0..=2 {
                let lhs = apply_factor_language(&phi, &image_language(&prod, n, t, &b).unwrap()).unwrap();
                assert_eq!(lhs.words, image_language(&min, n, t, &b).unwrap().words);
            }
        }
    }

    #[test]
    fn block_factor_shrinks_words() {
        let a = Arc::new(Alphabet::new(["0", "1"]).unwrap());
        let xor = FactorMap::from_fn(a.clone(), a.clone(), 1, |w| Sym(w[0].0 ^ w[2].0)).unwrap();
        assert_eq!(xor.apply_word(&a.parse_word("0110").unwrap()).unwrap(), a.parse_word("11").unwrap());
        assert!(xor.apply_word(&a.parse_word("01").unwrap()).is_err());
    }
}
