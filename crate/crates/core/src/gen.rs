//! Seeded random terms for property checks and corpus runs.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::name::{Name, NameSet};
use crate::process::Process;

/// Environment variable that fixes the seed of every generated corpus.
pub const SEED_VAR: &str = "SECRETPI_SEED";

/// Seed from `SECRETPI_SEED` when set and numeric, `default` otherwise.
pub fn seed_from_env(default: u64) -> u64 {
    std::env::var(SEED_VAR)
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(default)
}

#[derive(Debug, Clone)]
pub struct GenConfig {
    /// Upper bound on `Process::size` of every term.
    pub max_nodes: usize,
    pub spies: bool,
    pub repl: bool,
    pub names: Vec<Name>,
    /// Probability that a term is built around a matching output/input pair.
    pub redex_bias: f64,
}

impl GenConfig {
    /// Small spy-free, replication-free terms over `a, b, c, x`.
    pub fn harmony() -> Self {
        GenConfig {
            max_nodes: 8,
            spies: false,
            repl: false,
            names: ["a", "b", "c", "x"].into_iter().map(Name::from).collect(),
            redex_bias: 0.6,
        }
    }

    /// Every constructor, larger terms.
    pub fn general() -> Self {
        GenConfig {
            max_nodes: 14,
            spies: true,
            repl: true,
            names: ["a", "b", "c", "x", "y"]
                .into_iter()
                .map(Name::from)
                .collect(),
            redex_bias: 0.2,
        }
    }
}

pub struct TermGen {
    rng: ChaCha8Rng,
    cfg: GenConfig,
}

impl TermGen {
    pub fn new(seed: u64, cfg: GenConfig) -> Self {
        assert!(!cfg.names.is_empty(), "generator needs at least one name");
        TermGen {
            rng: ChaCha8Rng::seed_from_u64(seed),
            cfg,
        }
    }

    pub fn term(&mut self) -> Process {
        let budget = self.rng.gen_range(1..=self.cfg.max_nodes.max(1));
        if budget >= 5 && self.rng.gen_bool(self.cfg.redex_bias) {
            self.paired(budget)
        } else {
            self.sized(budget)
        }
    }

    /// `out | in` on a shared subject, possibly under one binder.
    fn paired(&mut self, budget: usize) -> Process {
        let bind = budget >= 6 && self.rng.gen_bool(0.5);
        let rest = budget - 5 - usize::from(bind);
        let left = self.rng.gen_range(0..=rest);
        let s = self.name();
        let out = Process::output(s.clone(), self.name(), self.sized(left + 1));
        let (param, set) = (self.name(), self.names());
        let body = self.sized(rest - left + 1);
        let inp = match self.rng.gen_range(0..3) {
            0 => Process::input(s, param, body),
            1 => Process::input_blocking(s, param, set, body),
            _ => Process::trusted(s, param, set, body),
        };
        let pair = Process::par(out, inp);
        match (bind, self.rng.gen_bool(0.5)) {
            (false, _) => pair,
            (true, true) => Process::new_(self.name(), pair),
            (true, false) => Process::hide(self.name(), pair),
        }
    }

    pub fn terms(&mut self, count: usize) -> Vec<Process> {
        (0..count).map(|_| self.term()).collect()
    }

    fn name(&mut self) -> Name {
        self.cfg.names.choose(&mut self.rng).unwrap().clone()
    }

    fn names(&mut self) -> NameSet {
        let k = self.rng.gen_range(0..=2);
        (0..k).map(|_| self.name()).collect()
    }

    fn sized(&mut self, budget: usize) -> Process {
        if budget <= 1 {
            return Process::Nil;
        }
        let mut shapes = vec![0, 0, 1, 2, 3, 4];
        if budget >= 3 {
            shapes.extend([5, 5]);
        }
        if self.cfg.repl {
            shapes.push(6);
        }
        if self.cfg.spies {
            shapes.push(7);
        }
        let rest = budget - 1;
        match *shapes.choose(&mut self.rng).unwrap() {
            0 => {
                let (s, o) = (self.name(), self.name());
                Process::output(s, o, self.sized(rest))
            }
            1 => {
                let (s, o) = (self.name(), self.name());
                Process::input(s, o, self.sized(rest))
            }
            2 => {
                let (s, o, b) = (self.name(), self.name(), self.names());
                match self.rng.gen_bool(0.5) {
                    true => Process::input_blocking(s, o, b, self.sized(rest)),
                    false => Process::trusted(s, o, b, self.sized(rest)),
                }
            }
            3 => {
                let n = self.name();
                Process::new_(n, self.sized(rest))
            }
            4 => {
                let n = self.name();
                Process::hide(n, self.sized(rest))
            }
            5 => {
                let left = self.rng.gen_range(1..rest);
                let l = self.sized(left);
                Process::par(l, self.sized(rest - left))
            }
            6 => Process::repl(self.sized(rest)),
            _ => {
                let spied = self.rng.gen_bool(0.5).then(|| self.name());
                Process::spy(spied, self.sized(rest))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn respects_the_node_bound() {
        let mut g = TermGen::new(7, GenConfig::harmony());
        for p in g.terms(500) {
            assert!(p.size() <= 8);
            assert!(!p.contains_spy() && !p.contains_repl());
        }
    }

    #[test]
    fn same_seed_same_terms() {
        let a = TermGen::new(3, GenConfig::general()).terms(50);
        let b = TermGen::new(3, GenConfig::general()).terms(50);
        assert_eq!(a, b);
    }
}
