//! Seeded random formulas for sweeps.

use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::element::DomainElement;
use crate::syntax::{Abstraction, Formula, PredicateSymbol, Term};

#[derive(Debug, Clone)]
pub struct GenConfig {
    /// Maximum connective nesting.
    pub depth: usize,
    pub predicates: Vec<PredicateSymbol>,
    pub variables: Vec<String>,
    /// Chance that an atom argument is an abstraction term.
    pub abstraction_probability: f64,
    /// Elements that may appear as ground arguments.
    pub elements: Vec<DomainElement>,
    pub ground_probability: f64,
    /// Whether `box`/`dia` may appear.
    pub modal: bool,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig {
            depth: 3,
            predicates: vec![PredicateSymbol::new("p", 1), PredicateSymbol::new("q", 2)],
            variables: ["x", "y", "z"].map(String::from).to_vec(),
            abstraction_probability: 0.2,
            elements: Vec::new(),
            ground_probability: 0.1,
            modal: false,
        }
    }
}

pub struct FormulaGen {
    cfg: GenConfig,
    rng: ChaCha8Rng,
}

impl FormulaGen {
    pub fn new(cfg: GenConfig, seed: u64) -> Self {
        assert!(!cfg.predicates.is_empty() && !cfg.variables.is_empty(), "empty generator pools");
        FormulaGen { cfg, rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    pub fn formula(&mut self) -> Formula {
        let depth = self.cfg.depth;
        self.gen(depth)
    }

    fn var(&mut self) -> String {
        self.cfg.variables.choose(&mut self.rng).expect("non-empty pool").clone()
    }

    fn gen(&mut self, depth: usize) -> Formula {
        if depth == 0 || self.rng.random_bool(0.2) {
            return self.atom(depth);
        }
        let d = depth - 1;
        let choices = if self.cfg.modal { 11 } else { 9 };
        match self.rng.random_range(0..choices) {
            0 | 1 => Formula::neg(self.gen(d)),
            2 | 3 => Formula::conj(self.gen(d), self.gen(d)),
            4 => Formula::or(self.gen(d), self.gen(d)),
            5 => Formula::implies(self.gen(d), self.gen(d)),
            6 => {
                let (l, r) = (self.gen(d), self.gen(d));
                if l.size() + r.size() > 24 { Formula::conj(l, r) } else { Formula::iff(l, r) }
            }
            7 | 8 => {
                let sub = self.gen(d);
                let free = sub.free_vars().into_vec();
                let x = match free.choose(&mut self.rng) {
                    Some(v) if self.rng.random_bool(0.85) => v.clone(),
                    _ => self.var(),
                };
                match self.rng.random_range(0..4) {
                    0 => Formula::forall(x, sub),
                    1 if sub.size() <= 12 => Formula::exists_unique(&x, sub),
                    _ => Formula::exists(x, sub),
                }
            }
            9 => Formula::nec(self.gen(d)),
            _ => Formula::possibly(self.gen(d)),
        }
    }

    fn atom(&mut self, depth: usize) -> Formula {
        match self.rng.random_range(0..12) {
            0 => return Formula::identity(self.arg(depth), self.arg(depth)),
            1 if self.rng.random_bool(0.3) => {
                return if self.rng.random_bool(0.5) { Formula::top() } else { Formula::bottom() };
            }
            _ => {}
        }
        let pred = self.cfg.predicates.choose(&mut self.rng).expect("non-empty pool").clone();
        let args = (0..pred.arity).map(|_| self.arg(depth)).collect();
        Formula::atom(pred, args)
    }

    fn arg(&mut self, depth: usize) -> Term {
        if self.rng.random_bool(self.cfg.abstraction_probability) {
            return Term::Abs(Box::new(self.abstraction(depth.min(1))));
        }
        if !self.cfg.elements.is_empty() && self.rng.random_bool(self.cfg.ground_probability) {
            return Term::Elem(self.cfg.elements.choose(&mut self.rng).expect("non-empty").clone());
        }
        Term::Var(self.var())
    }

    /// An abstraction over a shallow body with a random split of its
    /// free variables into `α` and `β`.
    pub fn abstraction(&mut self, depth: usize) -> Abstraction {
        let saved = self.cfg.abstraction_probability;
        self.cfg.abstraction_probability = 0.0;
        let body = self.gen(depth);
        self.cfg.abstraction_probability = saved;
        let mut alpha: Vec<String> = body.free_vars().into_vec().into_iter().filter(|_| self.rng.random_bool(0.5)).collect();
        alpha.shuffle(&mut self.rng);
        Abstraction::new(body, alpha).expect("α drawn from the free variables")
    }
}

/// `n` formulas from a fresh generator seeded with `seed`.
pub fn random_formulas(cfg: &GenConfig, seed: u64, n: usize) -> Vec<Formula> {
    let mut g = FormulaGen::new(cfg.clone(), seed);
    (0..n).map(|_| g.formula()).collect()
}
