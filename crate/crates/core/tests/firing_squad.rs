use std::collections::BTreeSet;

use clandestine_ca::firing_squad::*;
use clandestine_ca::{PresentedConfig, Rule, Sym};

fn sym(name: &str) -> Sym {
    fs_alphabet().require(name).unwrap()
}

fn word(text: &str) -> Vec<Sym> {
    fs_alphabet().parse_word(text).unwrap()
}

#[test]
fn killer_spreads_and_blank_is_quiescent() {
    let rule = fs_rule();
    assert_eq!(rule.apply(&word("B B B")), BLANK);
    assert!(rule.has_spreading_state(KILLER).unwrap());
    let n = rule.alphabet().len();
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                let nb = [Sym(a as u16), Sym(b as u16), Sym(c as u16)];
                let out = rule.apply(&nb);
                if nb.contains(&FIRING) && out != KILLER {
                    assert_eq!(nb, [FIRING; 3]);
                }
            }
        }
    }
}

#[test]
fn shipped_rule_file_matches() {
    let text = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/../../rules/fs.rule")).unwrap();
    assert_eq!(text, fs_rule_file());
    let parsed = Rule::parse_rule_file("fs", &text).unwrap();
    assert_eq!(parsed.table(), fs_rule().table());
    assert_eq!(Rule::builtin("fs").unwrap().table(), fs_rule().table());
}

#[test]
fn lone_sharp_splits_five_ways() {
    let c = PresentedConfig::finite(fs_alphabet(), BLANK, word("#")).unwrap();
    let orbit = simulate(&c, 2).unwrap();
    assert_eq!(orbit.configs[1].window(-1, 2), word("L1+l2a #' R1+r2a"));
    assert_eq!(orbit.configs[2].window(-2, 3), word("L1 l2 #' r2 R1"));
    let d = HistoryDiagram::from_orbit(&orbit, -3, 4).unwrap();
    assert!(d.is_valid());
    let e = lift_euclidean(&d).unwrap();
    let from_point: BTreeSet<Signal> = e
        .segments
        .iter()
        .filter(|s| s.start == HalfPoint { x2: 6, t: 0 })
        .map(|s| s.label)
        .collect();
    assert_eq!(from_point, Signal::ALL.iter().copied().filter(|s| !matches!(s, Signal::l1 | Signal::r1)).collect());
}

#[test]
fn spacing_set_fires_synchronously() {
    for n in spacing_set(5) {
        let out = firing_outcome(n, firing_time(n) + 2).unwrap();
        assert_eq!(out.first_firing, Some(firing_time(n)), "n={n}");
        assert_eq!(out.first_killer, None);
        assert!(out.synchronous);
    }
}

#[test]
fn other_spacings_are_killed() {
    for n in [2usize, 4, 5, 6, 8, 9, 10, 12] {
        let out = firing_outcome(n, 4 * n + 8).unwrap();
        assert!(out.first_killer.is_some(), "n={n}");
        assert_eq!(out.first_firing, None);
    }
    assert_eq!(firing_outcome(2, 10).unwrap().first_killer, Some(2));
}

#[test]
fn doubling_chain_reaches_firing() {
    for j in 0..=5 {
        let links = doubling_chain(j).unwrap().expect("chain");
        assert_eq!(links.len(), j as usize + 1);
        assert_eq!(links.last().unwrap().spacing, 0);
        for w in links.windows(2) {
            assert_eq!(spacing_successor(w[1].spacing), w[0].spacing);
            assert_eq!(w[1].time - w[0].time, doubling_time(w[1].spacing));
        }
    }
}

#[test]
fn reversed_orbits_are_valid_histories() {
    for n in [0usize, 1, 3, 7, 15] {
        let t = firing_time(n).min(31);
        let orbit = simulate(&sharp_config(n), t - 1).unwrap();
        let d = HistoryDiagram::from_orbit(&orbit, -20, 20).unwrap();
        let (ok, v) = validate_history(&d);
        assert!(ok, "n={n}: {v:?}");
        let e = lift_euclidean(&d).unwrap();
        let (ok, v) = validate_euclidean(&e);
        assert!(ok, "n={n}: {:?}", v.iter().map(|x| x.to_string()).collect::<Vec<_>>());
    }
    // the firing row itself is allowed at time 0 only
    let orbit = simulate(&sharp_config(3), 7).unwrap();
    assert!(HistoryDiagram::from_orbit(&orbit, 0, 8).unwrap().is_valid());
}

#[test]
fn broken_histories_are_reported() {
    let orbit = simulate(&sharp_config(3), 5).unwrap();
    let mut d = HistoryDiagram::from_orbit(&orbit, 0, 8).unwrap();
    d.rows[2][3] = KILLER;
    let (ok, v) = validate_history(&d);
    assert!(!ok);
    assert!(v.contains(&Violation::ForbiddenSymbol { cell: 3, time: 2 }));
    let mut d = HistoryDiagram::from_orbit(&orbit, 0, 8).unwrap();
    let old = d.rows[0][4];
    d.rows[0][4] = if old == BLANK { sym("#'") } else { BLANK };
    assert_eq!(validate_history(&d).1, vec![Violation::RuleMismatch { cell: 4, time: 0 }]);
}

fn seg(label: Signal, a: (i64, i64), b: (i64, i64)) -> Segment {
    Segment {
        label,
        start: HalfPoint { x2: a.0, t: a.1 },
        end: HalfPoint { x2: b.0, t: b.1 },
    }
}

fn diagram(points: &[(i64, i64)], segments: Vec<Segment>, width: i64, depth: i64) -> EuclideanDiagram {
    EuclideanDiagram {
        points: points.iter().copied().collect(),
        segments,
        width,
        depth,
    }
}

#[test]
fn euclidean_crossings() {
    assert!(validate_euclidean(&EuclideanDiagram::default()).0);
    let ok = diagram(&[], vec![seg(Signal::l1, (8, 0), (0, 4)), seg(Signal::r2, (0, 0), (4, 4))], 5, 5);
    assert!(validate_euclidean(&ok).0);
    let bad = diagram(&[], vec![seg(Signal::l1, (8, 0), (0, 4)), seg(Signal::l2, (6, 0), (2, 4))], 5, 5);
    let (valid, v) = validate_euclidean(&bad);
    assert!(!valid);
    assert!(matches!(v[0], EuclidViolation::ForbiddenCrossing { .. }));
    let slope = diagram(&[], vec![seg(Signal::r2, (0, 0), (4, 2))], 5, 5);
    assert!(validate_euclidean(&slope).1.contains(&EuclidViolation::BadSlope { segment: 0 }));
}

#[test]
fn euclidean_sharps_four_apart() {
    use Signal::*;
    let segments = vec![
        seg(L1, (4, 0), (0, 2)),
        seg(l2, (4, 0), (0, 4)),
        seg(Prime, (4, 0), (4, 4)),
        seg(r2, (4, 0), (8, 4)),
        seg(R1, (4, 0), (8, 2)),
        seg(L1, (12, 0), (8, 2)),
        seg(l2, (12, 0), (8, 4)),
        seg(Prime, (12, 0), (12, 4)),
        seg(r2, (12, 0), (16, 4)),
        seg(R1, (12, 0), (16, 2)),
        seg(l1, (8, 2), (4, 4)),
        seg(r1, (8, 2), (12, 4)),
    ];
    let e = diagram(&[(2, 0), (6, 0)], segments, 9, 5);
    let (ok, v) = validate_euclidean(&e);
    assert!(ok, "{v:?}");
    assert!(e.to_svg().starts_with("<svg"));
}

#[test]
fn adjacent_sharps_are_invalid() {
    use Signal::*;
    let segments = vec![seg(R1, (4, 0), (6, 1)), seg(L1, (6, 0), (4, 1))];
    let e = diagram(&[(2, 0), (3, 0)], segments, 9, 5);
    assert!(!validate_euclidean(&e).0);
}

#[test]
fn lifting_rejects_killer() {
    let mut d = HistoryDiagram::new(vec![word("B B B"), word("B B B")]).unwrap();
    d.rows[0][1] = KILLER;
    assert!(lift_euclidean(&d).is_err());
}

#[test]
fn backward_reach_examples() {
    assert!(backward_reach(&word("B"), 8).unwrap());
    assert!(backward_reach(&word("γ"), 3).unwrap());
    assert!(!backward_reach(&word("L1 R1"), 2).unwrap());
}

#[test]
fn backward_reach_is_monotone() {
    let a = fs_alphabet();
    let mut words: Vec<Vec<Sym>> = a.syms().map(|s| vec![s]).collect();
    for x in a.syms() {
        for y in [BLANK, SHARP, sym("r1"), sym("L1"), sym("γ")] {
            words.push(vec![x, y]);
        }
    }
    for w in words {
        let mut prev = true;
        for t in 0..=4 {
            let now = backward_reach(&w, t).unwrap();
            assert!(prev || !now, "{} at T={t}", a.format_word(&w));
            prev = now;
        }
    }
}
