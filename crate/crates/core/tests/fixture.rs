use std::path::PathBuf;

use num_traits::Signed;
use proptest::prelude::*;

use wahlkit::ampleness::check_ampleness;
use wahlkit::blowdown::{discrepancy_assignment, sigma_star_k};
use wahlkit::config::{load, ConfigFile, CurveDecl};
use wahlkit::geometry::{BlowupStep, Chain, Configuration, Fiber};
use wahlkit::lattice::rational;
use wahlkit::swcert::{complement_basis, verify_certificate};
use wahlkit::wahl::find_wahl_subchains;

fn fixture_text() -> String {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures/matic-5rp2.cfg");
    std::fs::read_to_string(path).unwrap()
}

fn fixture() -> (ConfigFile, Configuration) {
    load(&fixture_text()).unwrap()
}

#[test]
fn fixture_round_trips() {
    let (file, cfg) = fixture();
    let (file2, cfg2) = load(&file.to_string()).unwrap();
    assert_eq!(file, file2);
    assert_eq!(cfg, cfg2);
    assert_eq!(file.to_string(), file2.to_string());
}

#[test]
fn alpha_scales() {
    let (file, cfg) = fixture();
    let alpha = file.alpha_class(cfg.n()).unwrap().unwrap();
    for k in [2, 3] {
        let c = verify_certificate(&cfg, &(&alpha * k)).unwrap();
        assert!(c.accepted);
        assert_eq!((c.alpha_sq, c.k_dot_alpha, c.h_dot_alpha), (10 * k * k, -12 * k, 15 * k));
    }
    let c = verify_certificate(&cfg, &-&alpha).unwrap();
    assert!(!c.accepted);
}

#[test]
fn complement_basis_is_orthogonal_and_full() {
    let (_, cfg) = fixture();
    let basis = complement_basis(&cfg).unwrap();
    // 23 − rank of the 18 chain classes
    assert_eq!(basis.len(), 5);
    for b in &basis {
        for ch in cfg.contracted_chains() {
            for c in &ch.curves {
                assert_eq!(cfg.class_of(c).unwrap().pair(b).unwrap(), 0);
            }
        }
    }
}

#[test]
fn ampleness_survives_removing_off_support_curves() {
    let (file, cfg) = fixture();
    let d = discrepancy_assignment(&cfg).unwrap();
    let s = sigma_star_k(&cfg, &file.kw, &d).unwrap();
    let base = check_ampleness(&cfg, &s).unwrap();
    assert!(base.verdict.is_verified());
    let off: Vec<&str> = ["E2", "E7", "E8", "Q"].into();
    for name in &off {
        assert!(!base.support.iter().any(|x| x == name));
    }
    for mask in 0u32..(1 << off.len()) {
        let mut smaller = cfg.clone();
        for (i, name) in off.iter().enumerate() {
            if mask >> i & 1 == 1 {
                smaller.remove_curve(name).unwrap();
            }
        }
        let r = check_ampleness(&smaller, &s).unwrap();
        assert!(r.verdict.is_verified(), "mask {mask}");
        for p in &r.pairings {
            assert_eq!(Some(&p.value), base.pairing(&p.curve));
        }
    }
}

#[test]
fn q_pairs_nonzero_and_fiber_members_positive() {
    let (file, cfg) = fixture();
    let d = discrepancy_assignment(&cfg).unwrap();
    let s = sigma_star_k(&cfg, &file.kw, &d).unwrap();
    let r = check_ampleness(&cfg, &s).unwrap();
    assert_eq!(r.pairing("Q"), Some(&(rational(171, 65) + rational(138, 79))));
    assert!(s.coefficient("F1").unwrap() == &rational(127, 195));
    for (c, _) in &cfg.fiber("I6").unwrap().components {
        assert!(s.coefficient(c).unwrap().is_positive());
    }
}

#[test]
fn search_on_chain_one_only() {
    let (_, mut cfg) = fixture();
    let keep: Vec<String> = cfg.chain("C1").unwrap().curves.clone();
    let drop: Vec<String> = cfg
        .curves()
        .iter()
        .map(|c| c.name.clone())
        .filter(|n| !keep.contains(n))
        .collect();
    for n in &drop {
        cfg.remove_curve(n).unwrap();
    }
    let s = find_wahl_subchains(&cfg, 1000).unwrap();
    assert!(s.candidates.iter().any(|c| c.curves == keep));
    assert!(s.candidates.iter().all(|c| c.curves.iter().all(|x| keep.contains(x))));
    // the only candidate of length 1 is the (−4)-curve B
    let singles: Vec<_> = s.candidates.iter().filter(|c| c.curves.len() == 1).collect();
    assert_eq!(singles.len(), 1);
    assert_eq!(singles[0].curves, vec!["B".to_string()]);
    for (a, b) in s.pair_names() {
        assert!(a.iter().all(|x| !b.contains(x)));
        assert!(a.len() + b.len() < keep.len());
    }
    assert!(!s.truncated);
}

#[test]
fn search_is_deterministic() {
    let (_, cfg) = fixture();
    let a = find_wahl_subchains(&cfg, 50).unwrap();
    let b = find_wahl_subchains(&cfg, 50).unwrap();
    assert_eq!(a, b);
    let c1 = cfg.chain("C1").unwrap().curves.clone();
    let c2 = cfg.chain("C2").unwrap().curves.clone();
    let names = find_wahl_subchains(&cfg, 10_000).unwrap().pair_names();
    assert!(names.iter().any(|(x, y)| (x == &c1 && y == &c2) || (x == &c2 && y == &c1)));
    let none = find_wahl_subchains(&cfg, 0).unwrap();
    assert!(none.pairs.is_empty() && !none.truncated);
}

fn config_strategy() -> impl Strategy<Value = ConfigFile> {
    let curves = prop::collection::vec((1u32..=4, any::<bool>(), 0u32..=2), 1..5);
    (curves, 0usize..8, any::<u64>()).prop_map(|(curves, n_steps, seed)| {
        let mut bits = seed;
        let mut next = |m: u64| {
            let v = bits % m;
            bits = bits.rotate_left(7) ^ 0x9e37_79b9_7f4a_7c15;
            v
        };
        let curves: Vec<CurveDecl> = curves
            .into_iter()
            .enumerate()
            .map(|(i, (degree, rational, nodes))| CurveDecl {
                name: format!("P{i}"),
                degree,
                rational,
                nodes,
            })
            .collect();
        let mut names: Vec<String> = curves.iter().map(|c| c.name.clone()).collect();
        let mut blowups = Vec::new();
        for index in 1..=n_steps {
            let mut through = Vec::new();
            for n in &names {
                if next(3) == 0 {
                    through.push((n.clone(), 1 + next(2) as u32));
                }
            }
            let parent = through
                .iter()
                .find(|(n, _)| n.starts_with('E'))
                .map(|(n, _)| n.clone())
                .filter(|_| next(2) == 0);
            blowups.push(BlowupStep {
                index,
                through,
                parent,
                real: next(2) == 0,
            });
            names.push(format!("E{index}"));
        }
        let chain_len = 1 + next(names.len() as u64) as usize;
        let chains = vec![Chain {
            name: "c'".into(),
            curves: names[..chain_len].to_vec(),
            aux: next(2) == 0,
        }];
        let fibers = vec![Fiber {
            name: "F".into(),
            components: names.iter().take(2).map(|n| (n.clone(), 1 + next(3) as u32)).collect(),
        }];
        let kw = names
            .iter()
            .take(3)
            .map(|n| (n.clone(), rational(next(9) as i64 - 4, 1 + next(5) as i64)))
            .collect();
        let alpha = (next(2) == 0).then(|| vec![(0, next(20) as i64 - 10), (n_steps.min(1), -1)]);
        let alpha = alpha.map(|mut a| {
            a.dedup_by_key(|t| t.0);
            a
        });
        ConfigFile {
            name: format!("rand{}", next(100)),
            anticanonical_fibered: next(2) == 0,
            curves,
            blowups,
            chains,
            fibers,
            kw,
            alpha,
            expect: vec![("P0".into(), vec![(0, 1), (n_steps.max(1), -2)])],
        }
    })
}

proptest! {
    #[test]
    fn config_round_trip(file in config_strategy()) {
        let text = file.to_string();
        let parsed: ConfigFile = text.parse().unwrap();
        prop_assert_eq!(&parsed, &file);
        prop_assert_eq!(parsed.to_string(), text);
        prop_assert_eq!(parsed.build(), file.build());
    }
}
