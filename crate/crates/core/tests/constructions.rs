use clandestine_ca::constructions::{add_spreading, build_delta, build_tilde, tilde_embedding, DeltaAlphabet};
use clandestine_ca::firing_squad::{fs_rule, FIRING, KILLER};
use clandestine_ca::rule::check_sub_automaton;
use clandestine_ca::{Rule, Sym};
use proptest::prelude::*;

fn spread110() -> (Rule, Sym) {
    add_spreading(&Rule::elementary(110)).unwrap()
}

// Local rule of the squad-frozen extension, recomputed from symbol names.
fn delta_by_names(f: &Rule, s: &Rule, zero: &str, nb: &[&str]) -> String {
    let split = |n: &str| -> Option<(String, String)> {
        let inner = n.strip_prefix('(')?.strip_suffix(')')?;
        let (a, q) = inner.split_once('|')?;
        Some((a.to_string(), q.to_string()))
    };
    let parts: Vec<Option<(String, String)>> = nb.iter().map(|n| split(n)).collect();
    let fa = f.alphabet();
    let sa = s.alphabet();
    if parts.iter().all(Option::is_none) {
        let syms: Vec<Sym> = nb.iter().map(|n| fa.sym(n).unwrap()).collect();
        return fa.name(f.apply(&syms)).to_string();
    }
    if parts.iter().any(Option::is_none) {
        return zero.to_string();
    }
    let pairs: Vec<(String, String)> = parts.into_iter().map(Option::unwrap).collect();
    let killer = sa.name(KILLER);
    let firing = sa.name(FIRING);
    if pairs.iter().all(|(_, q)| q == firing) {
        return pairs[1].0.clone();
    }
    if pairs.iter().all(|(_, q)| q != firing && q != killer) {
        let qs: Vec<Sym> = pairs.iter().map(|(_, q)| sa.sym(q).unwrap()).collect();
        return format!("({}|{})", pairs[1].0, sa.name(s.apply(&qs)));
    }
    zero.to_string()
}

#[test]
fn delta_alphabet_size() {
    let (f, zero) = spread110();
    let (d, spec) = build_delta(&f, zero, fs_rule(), KILLER, FIRING).unwrap();
    assert_eq!(d.alphabet().len(), 3 + 3 * 22);
    assert_eq!(spec.radius, 1);
    assert!(d.has_spreading_state(zero).unwrap());
}

#[test]
fn delta_rejects_bad_parameters() {
    let f = Rule::elementary(110);
    assert!(build_delta(&f, Sym(0), fs_rule(), KILLER, FIRING).is_err());
    let (f, zero) = spread110();
    assert!(build_delta(&f, zero, fs_rule(), KILLER, KILLER).is_err());
    assert!(build_delta(&f, zero, fs_rule(), KILLER, Sym(99)).is_err());
    assert!(add_spreading(&f).is_err());
}

#[test]
fn base_and_squad_are_sub_automata() {
    let (f, zero) = spread110();
    let (d, spec) = build_delta(&f, zero, fs_rule(), KILLER, FIRING).unwrap();
    let da: &DeltaAlphabet = &spec.alphabet;
    let emb = f.alphabet().syms().map(|a| (a, da.pure(a))).collect();
    let sub: Vec<Sym> = f.alphabet().syms().collect();
    assert!(check_sub_automaton(&d, &sub, &f, &emb).unwrap());
    for g in [Rule::elementary(110), Rule::elementary(90), Rule::min()] {
        let t = build_tilde(&g).unwrap();
        let (sub, emb) = tilde_embedding(&g).unwrap();
        assert!(check_sub_automaton(&t, &sub, &g, &emb).unwrap(), "{}", g.name());
    }
}

#[test]
fn spreading_completion() {
    let (f, bottom) = spread110();
    assert_eq!(f.spreading_states(), vec![bottom]);
    let a = f.alphabet();
    let w = a.parse_word("0 1 1 ⊥ 1 0 1").unwrap();
    assert_eq!(a.format_word(&f.block_map(&w).unwrap()), "1⊥⊥⊥1");
}

// Flag -1 carries letters rightward, flag +1 leftward, flag 0 runs the rule.
fn tilde_step(g: &Rule, flags: &[i8], base: &[Sym]) -> (Vec<i8>, Vec<Sym>) {
    let n = flags.len();
    let mut f2 = Vec::new();
    let mut b2 = Vec::new();
    for i in 1..n - 1 {
        f2.push(flags[i]);
        b2.push(match flags[i] {
            -1 => base[i - 1],
            1 => base[i + 1],
            _ => g.apply(&base[i - 1..=i + 1]),
        });
    }
    (f2, b2)
}

fn flagged(k: u16, len: usize) -> impl Strategy<Value = Vec<(i8, Sym)>> {
    prop::collection::vec(((-1i8..=1), (0..k).prop_map(Sym)), len)
}

proptest! {
    #[test]
    fn tilde_matches_flag_transport(code in any::<u8>(), cells in flagged(2, 9)) {
        let g = Rule::elementary(code);
        let t = build_tilde(&g).unwrap();
        let ta = t.alphabet();
        let ga = g.alphabet();
        let w: Vec<Sym> = cells
            .iter()
            .map(|&(fl, c)| {
                let f = match fl { -1 => "-1", 0 => "0", _ => "+1" };
                ta.sym(&format!("({f},{})", ga.name(c))).unwrap()
            })
            .collect();
        let flags: Vec<i8> = cells.iter().map(|c| c.0).collect();
        let base: Vec<Sym> = cells.iter().map(|c| c.1).collect();
        let (f2, b2) = tilde_step(&g, &flags, &base);
        let (f3, b3) = tilde_step(&g, &f2, &b2);
        let got = t.iterate_block(&w, 2).unwrap();
        for (i, s) in got.iter().enumerate() {
            let f = match f3[i] { -1 => "-1", 0 => "0", _ => "+1" };
            prop_assert_eq!(ta.name(*s), format!("({f},{})", ga.name(b3[i])));
        }
    }

    #[test]
    fn delta_matches_name_oracle(idx in prop::collection::vec(0usize..69, 3..12)) {
        let (f, zero) = spread110();
        let (d, _) = build_delta(&f, zero, fs_rule(), KILLER, FIRING).unwrap();
        let a = d.alphabet();
        let w: Vec<Sym> = idx.iter().map(|&i| Sym(i as u16)).collect();
        let names: Vec<&str> = w.iter().map(|&s| a.name(s)).collect();
        let got = d.block_map(&w).unwrap();
        for (i, s) in got.iter().enumerate() {
            prop_assert_eq!(a.name(*s), delta_by_names(&f, fs_rule(), "⊥", &names[i..i + 3]));
        }
    }

    #[test]
    fn delta_live_squad_blocks_stay_paired(a in prop::collection::vec(0u16..3, 5), q in prop::collection::vec(prop::sample::select((0u16..22).filter(|&q| q != 1 && q != 2).collect::<Vec<_>>()), 5)) {
        let (f, zero) = spread110();
        let (d, spec) = build_delta(&f, zero, fs_rule(), KILLER, FIRING).unwrap();
        let da = &spec.alphabet;
        let w: Vec<Sym> = a.iter().zip(&q).map(|(&a, &q)| da.pair(Sym(a), Sym(q))).collect();
        let qs: Vec<Sym> = q.iter().map(|&q| Sym(q)).collect();
        let want = fs_rule().block_map(&qs).unwrap();
        let got = d.block_map(&w).unwrap();
        for (i, s) in got.iter().enumerate() {
            prop_assert_eq!(*s, da.pair(Sym(a[i + 1]), want[i]));
        }
    }
}
