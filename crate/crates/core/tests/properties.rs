use std::collections::BTreeMap;

use proptest::prelude::*;

use ifol::element::particulars;
use ifol::gen::{random_formulas, GenConfig};
use ifol::semantics::{satisfies_tarski, Extensionalizer};
use ifol::syntax::PredicateSymbol;
use ifol::worlds::{enumerate_worlds, satisfies, WorldSet, DEFAULT_LIMIT};
use ifol::{interpret, parse_formula, Assignment, ConceptStore, DomainElement, Formula, Signature};

fn worlds() -> WorldSet {
    let preds = [PredicateSymbol::new("p", 1), PredicateSymbol::new("q", 2)];
    let consts = BTreeMap::from([("c".to_string(), DomainElement::particular("a"))]);
    enumerate_worlds(&preds, particulars(["a", "b"]), consts, DEFAULT_LIMIT).expect("enumerable")
}

fn formula(seed: u64, modal: bool) -> Formula {
    let cfg = GenConfig { elements: particulars(["a", "b"]), modal, ..GenConfig::default() };
    random_formulas(&cfg, seed, 1).pop().expect("one formula")
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn printing_then_parsing_is_identity(seed in any::<u64>(), modal in any::<bool>()) {
        let f = formula(seed, modal);
        let back = parse_formula(&f.to_string(), &Signature::open()).expect("printed formulas parse");
        prop_assert_eq!(&back, &f);
        prop_assert_eq!(back.free_vars(), f.free_vars());
    }

    #[test]
    fn memo_is_transparent(seed in any::<u64>(), w in 0usize..64) {
        let ws = worlds();
        let store = ConceptStore::new();
        let f = formula(seed, true);
        let u = interpret(&store, &f).expect("interprets");
        let cached = Extensionalizer::new(&store, ws.worlds());
        let plain = Extensionalizer::uncached(&store, ws.worlds());
        let first = cached.extensionalize(&u, w).expect("extension");
        prop_assert_eq!(&first, &cached.extensionalize(&u, w).expect("extension"));
        prop_assert_eq!(&first, &plain.extensionalize(&u, w).expect("extension"));
    }

    #[test]
    fn kripke_satisfaction_agrees_with_tarski(seed in any::<u64>(), w in 0usize..64, xa in any::<bool>(), ya in any::<bool>()) {
        let ws = worlds();
        let store = ConceptStore::new();
        let f = formula(seed, true);
        let pick = |b: bool| DomainElement::particular(if b { "a" } else { "b" });
        let g: Assignment = f.free_vars().into_vec().into_iter().zip([pick(xa), pick(ya), pick(xa ^ ya)]).collect();
        prop_assume!(g.len() == f.free_vars().len());
        let kripke = satisfies(&store, &ws, w, &g, &f).expect("satisfaction defined");
        prop_assert_eq!(kripke, satisfies_tarski(&store, ws.worlds(), w, &f, &g).expect("tarski defined"));
    }
}
