//! Rules built from other rules: the flag-shifted extension that makes
//! column factors order-2, the squad-frozen extension whose limit set is
//! controlled by a firing squad, and the spreading-state completion.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::alphabet::{Alphabet, Sym};
use crate::error::{Error, Result};
use crate::rule::Rule;

/// Name of the flagged symbol `(flag, c)` with flag in {-1, 0, +1}.
pub fn tilde_symbol_name(flag: i8, base: &str) -> String {
    let f = match flag {
        -1 => "-1",
        0 => "0",
        _ => "+1",
    };
    format!("({f},{base})")
}

/// Alphabet `{-1,0,+1} x C`, flag major: symbol index = (flag+1)*|C| + c.
#[derive(Clone, Debug)]
pub struct TildeAlphabet {
    pub base: Arc<Alphabet>,
    pub alphabet: Arc<Alphabet>,
}

impl TildeAlphabet {
    pub fn new(base: Arc<Alphabet>) -> Result<TildeAlphabet> {
        let mut names = Vec::with_capacity(3 * base.len());
        for flag in [-1i8, 0, 1] {
            for c in base.names() {
                names.push(tilde_symbol_name(flag, c));
            }
        }
        Ok(TildeAlphabet {
            alphabet: Arc::new(Alphabet::new(names)?),
            base,
        })
    }

    pub fn sym(&self, flag: i8, c: Sym) -> Sym {
        Sym(((flag + 1) as usize * self.base.len() + c.index()) as u16)
    }

    pub fn flag(&self, s: Sym) -> i8 {
        (s.index() / self.base.len()) as i8 - 1
    }

    pub fn base_of(&self, s: Sym) -> Sym {
        Sym((s.index() % self.base.len()) as u16)
    }
}

/// The flagged extension of `g`: a cell with flag `±1` copies the base letter
/// of its neighbour at distance `radius` on that side (keeping its flag);
/// flag-0 cells apply `g` to the base letters. Radius-0 inputs are widened
/// to radius 1 first.
pub fn build_tilde(g: &Rule) -> Result<Rule> {
    let g = if g.radius() == 0 { g.widen(1)? } else { g.clone() };
    let r = g.radius();
    let ta = TildeAlphabet::new(g.alphabet().clone())?;
    let mut base_nb = vec![Sym(0); 2 * r + 1];
    Rule::from_fn(format!("tilde({})", g.name()), ta.alphabet.clone(), r, |nb| {
        let flag = ta.flag(nb[r]);
        match flag {
            0 => {
                for (b, s) in base_nb.iter_mut().zip(nb) {
                    *b = ta.base_of(*s);
                }
                ta.sym(0, g.apply(&base_nb))
            }
            -1 => ta.sym(-1, ta.base_of(nb[0])),
            _ => ta.sym(1, ta.base_of(nb[2 * r])),
        }
    })
}

/// Symbols of the flag-0 copy of the base alphabet, with the embedding
/// `c -> (0,c)`.
pub fn tilde_embedding(g: &Rule) -> Result<(Vec<Sym>, BTreeMap<Sym, Sym>)> {
    let ta = TildeAlphabet::new(g.alphabet().clone())?;
    let emb: BTreeMap<Sym, Sym> = g.alphabet().syms().map(|c| (c, ta.sym(0, c))).collect();
    Ok((emb.values().copied().collect(), emb))
}

/// Alphabet `A ⊔ (A x Q)`: indices `0..|A|` are the pure letters, then pairs
/// `(a|q)` in `a`-major order.
#[derive(Clone, Debug)]
pub struct DeltaAlphabet {
    pub base: Arc<Alphabet>,
    pub squad: Arc<Alphabet>,
    pub alphabet: Arc<Alphabet>,
}

pub enum DeltaSymbol {
    Pure(Sym),
    Pair(Sym, Sym),
}

impl DeltaAlphabet {
    pub fn new(base: Arc<Alphabet>, squad: Arc<Alphabet>) -> Result<DeltaAlphabet> {
        let mut names: Vec<String> = base.names().to_vec();
        for a in base.names() {
            for q in squad.names() {
                names.push(format!("({a}|{q})"));
            }
        }
        Ok(DeltaAlphabet {
            alphabet: Arc::new(Alphabet::new(names)?),
            base,
            squad,
        })
    }

    pub fn pure(&self, a: Sym) -> Sym {
        a
    }

    pub fn pair(&self, a: Sym, q: Sym) -> Sym {
        Sym((self.base.len() + a.index() * self.squad.len() + q.index()) as u16)
    }

    pub fn classify(&self, s: Sym) -> DeltaSymbol {
        let na = self.base.len();
        if s.index() < na {
            DeltaSymbol::Pure(s)
        } else {
            let i = s.index() - na;
            DeltaSymbol::Pair(Sym((i / self.squad.len()) as u16), Sym((i % self.squad.len()) as u16))
        }
    }

    pub fn is_pure(&self, s: Sym) -> bool {
        s.index() < self.base.len()
    }
}

/// Which of the four local cases fires on a neighbourhood.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum DeltaCase {
    /// all letters pure: apply `f`
    Base,
    /// all letters paired with the firing state: release the center letter
    Fire,
    /// all letters paired with non-killer, non-firing states: run the squad
    Squad,
    /// anything else: spreading zero
    Collapse,
}

/// Parameters of the squad-frozen extension.
#[derive(Clone, Debug)]
pub struct DeltaSpec {
    pub alphabet: DeltaAlphabet,
    pub zero: Sym,
    pub killer: Sym,
    pub firing: Sym,
    pub radius: usize,
}

impl DeltaSpec {
    pub fn case_of(&self, nb: &[Sym]) -> DeltaCase {
        let da = &self.alphabet;
        if nb.iter().all(|&s| da.is_pure(s)) {
            return DeltaCase::Base;
        }
        let mut all_fire = true;
        let mut all_live = true;
        for &s in nb {
            match da.classify(s) {
                DeltaSymbol::Pure(_) => return DeltaCase::Collapse,
                DeltaSymbol::Pair(_, q) => {
                    all_fire &= q == self.firing;
                    all_live &= q != self.firing && q != self.killer;
                }
            }
        }
        if all_fire {
            DeltaCase::Fire
        } else if all_live {
            DeltaCase::Squad
        } else {
            DeltaCase::Collapse
        }
    }
}

/// Builds the squad-frozen extension of `f` (which must have the spreading
/// state `zero`) by the squad rule `s` with killer `killer` and firing state
/// `firing`. Both rules are widened to the common radius.
pub fn build_delta(f: &Rule, zero: Sym, s: &Rule, killer: Sym, firing: Sym) -> Result<(Rule, DeltaSpec)> {
    if !f.has_spreading_state(zero)? {
        return Err(Error::Precondition(format!(
            "`{}` is not a spreading state of {}",
            f.alphabet().name(zero),
            f.name()
        )));
    }
    if killer == firing {
        return Err(Error::Precondition("killer and firing states must differ".into()));
    }
    if killer.index() >= s.alphabet().len() || firing.index() >= s.alphabet().len() {
        return Err(Error::UnknownSymbol("killer/firing state outside the squad alphabet".into()));
    }
    let r = f.radius().max(s.radius());
    let fw = f.widen(r)?;
    let sw = s.widen(r)?;
    let da = DeltaAlphabet::new(f.alphabet().clone(), s.alphabet().clone())?;
    let spec = DeltaSpec {
        alphabet: da.clone(),
        zero,
        killer,
        firing,
        radius: r,
    };
    let width = 2 * r + 1;
    let mut a_nb = vec![Sym(0); width];
    let mut q_nb = vec![Sym(0); width];
    let rule = Rule::from_fn(format!("delta({},{})", f.name(), s.name()), da.alphabet.clone(), r, |nb| {
        match spec.case_of(nb) {
            DeltaCase::Base => fw.apply(nb),
            DeltaCase::Fire => match da.classify(nb[r]) {
                DeltaSymbol::Pair(a, _) => a,
                DeltaSymbol::Pure(a) => a,
            },
            DeltaCase::Squad => {
                for i in 0..width {
                    if let DeltaSymbol::Pair(a, q) = da.classify(nb[i]) {
                        a_nb[i] = a;
                        q_nb[i] = q;
                    }
                }
                da.pair(a_nb[r], sw.apply(&q_nb))
            }
            DeltaCase::Collapse => zero,
        }
    })?;
    Ok((rule, spec))
}

/// Name used for the added spreading symbol.
pub const SPREAD_SYMBOL: &str = "⊥";

/// `f` over `A ⊔ {⊥}` with `⊥` spreading; agrees with `f` on `A`-tuples.
pub fn add_spreading(f: &Rule) -> Result<(Rule, Sym)> {
    if f.alphabet().sym(SPREAD_SYMBOL).is_some() {
        return Err(Error::Precondition(format!("`{SPREAD_SYMBOL}` already belongs to the alphabet")));
    }
    let mut names = f.alphabet().names().to_vec();
    names.push(SPREAD_SYMBOL.to_string());
    let mut alphabet = Alphabet::new(names)?;
    if let Some(g) = f.alphabet().glyphs() {
        let mut g = g.to_vec();
        g.push('⊥');
        alphabet = alphabet.with_glyphs(g)?;
    }
    let bottom = Sym(f.alphabet().len() as u16);
    let rule = Rule::from_fn(format!("spread({})", f.name()), Arc::new(alphabet), f.radius(), |nb| {
        if nb.contains(&bottom) {
            bottom
        } else {
            f.apply(nb)
        }
    })?;
    Ok((rule, bottom))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rule::check_sub_automaton;

    #[test]
    fn tilde_examples() {
        let g = Rule::elementary(110);
        let t = build_tilde(&g).unwrap();
        let a = t.alphabet();
        let nb = |names: [&str; 3]| names.iter().map(|n| a.sym(n).unwrap()).collect::<Vec<_>>();
        assert_eq!(a.name(t.apply(&nb(["(-1,1)", "(+1,0)", "(0,1)"]))), "(+1,1)");
        assert_eq!(a.name(t.apply(&nb(["(+1,1)", "(0,1)", "(-1,0)"]))), "(0,1)"); // 110 on 110 -> 1
        assert_eq!(a.name(t.apply(&nb(["(+1,0)", "(0,0)", "(-1,0)"]))), "(0,0)");
        assert_eq!(a.name(t.apply(&nb(["(0,1)", "(-1,0)", "(+1,0)"]))), "(-1,1)");
        assert_eq!(a.len(), 6);
    }

    #[test]
    fn tilde_flag_invariance_and_embedding() {
        let g = Rule::elementary(110);
        let t = build_tilde(&g).unwrap();
        let ta = TildeAlphabet::new(g.alphabet().clone()).unwrap();
        let k = t.alphabet().len();
        for idx in 0..k * k * k {
            let nb = [Sym((idx / (k * k)) as u16), Sym((idx / k % k) as u16), Sym((idx % k) as u16)];
            assert_eq!(ta.flag(t.apply(&nb)), ta.flag(nb[1]));
        }
        let (sub, emb) = tilde_embedding(&g).unwrap();
        assert!(check_sub_automaton(&t, &sub, &g, &emb).unwrap());
    }

    #[test]
    fn tilde_widens_radius_zero() {
        let a = Arc::new(Alphabet::new(["x", "y"]).unwrap());
        let swap = Rule::from_fn("swap", a, 0, |nb| Sym(1 - nb[0].0)).unwrap();
        assert_eq!(build_tilde(&swap).unwrap().radius(), 1);
    }

    #[test]
    fn spreading_examples() {
        let (s, bot) = add_spreading(&Rule::shift()).unwrap();
        let a = s.alphabet().clone();
        let (x, y) = (a.sym("a").unwrap(), a.sym("b").unwrap());
        assert_eq!(s.apply(&[x, bot, y]), bot);
        assert_eq!(s.apply(&[x, y, x]), x);
        assert!(s.has_spreading_state(bot).unwrap());
        let emb: BTreeMap<Sym, Sym> = [(Sym(0), Sym(0)), (Sym(1), Sym(1))].into_iter().collect();
        assert!(check_sub_automaton(&s, &[x, y], &Rule::shift(), &emb).unwrap());
        assert!(add_spreading(&s).is_err());
    }

    #[test]
    fn delta_requires_spreading_zero() {
        let sq = Rule::identity();
        let err = build_delta(&Rule::shift(), Sym(0), &sq, Sym(0), Sym(1)).unwrap_err();
        assert!(matches!(err, Error::Precondition(_)));
    }

    #[test]
    fn delta_cases_with_min() {
        // squad: three states {k, g, B}, killer k, firing g, identity dynamics
        let qa = Arc::new(Alphabet::new(["k", "g", "B"]).unwrap());
        let sq = Rule::from_fn("sq", qa, 1, |nb| nb[1]).unwrap();
        let min = Rule::min();
        let (d, spec) = build_delta(&min, Sym(0), &sq, Sym(0), Sym(1)).unwrap();
        let da = &spec.alphabet;
        let one = Sym(1);
        let zero = Sym(0);
        let g = Sym(1);
        assert_eq!(d.apply(&[one, one, one]), one);
        assert_eq!(d.apply(&[da.pair(one, g), da.pair(zero, g), da.pair(one, g)]), zero);
        assert_eq!(d.apply(&[da.pair(one, g), da.pair(one, g), da.pair(one, g)]), one);
        assert_eq!(d.apply(&[one, da.pair(zero, g), one]), zero);
        let b = Sym(2);
        assert_eq!(d.apply(&[da.pair(one, b), da.pair(one, b), da.pair(zero, b)]), da.pair(one, b));
        assert_eq!(d.alphabet().len(), 2 + 2 * 3);
        assert!(check_sub_automaton(
            &d,
            &[Sym(0), Sym(1)],
            &min,
            &[(Sym(0), Sym(0)), (Sym(1), Sym(1))].into_iter().collect()
        )
        .unwrap());
    }
}
