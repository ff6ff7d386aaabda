//! Named ways of producing a generating set, selectable at run time.

use crate::algebra::GeneratingSet;
use crate::construct::{quadratic_basis_sp_with, ConstructConfig};
use crate::error::{Error, Result};
use crate::fiber::DEFAULT_FIBER_CAP;
use crate::graph::Graph;
use crate::oracle::{all_kernel_quadrics, markov_basis_up_to_degree, DEFAULT_MAX_DEGREE};
use crate::sp::is_k4_minor_free;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StrategyConfig {
    pub max_degree: usize,
    pub fiber_cap: u128,
}

impl Default for StrategyConfig {
    fn default() -> Self {
        StrategyConfig { max_degree: DEFAULT_MAX_DEGREE, fiber_cap: DEFAULT_FIBER_CAP }
    }
}

pub trait BasisStrategy: Send + Sync {
    fn name(&self) -> &'static str;
    fn generate(&self, g: &Graph, config: &StrategyConfig) -> Result<GeneratingSet>;
}

/// Brute-force fiber connectivity up to `max_degree`.
pub struct Oracle;

impl BasisStrategy for Oracle {
    fn name(&self) -> &'static str {
        "oracle"
    }

    fn generate(&self, g: &Graph, config: &StrategyConfig) -> Result<GeneratingSet> {
        markov_basis_up_to_degree(g, config.max_degree, config.fiber_cap)
    }
}

/// The recursive quadratic construction; fails on graphs with a `K4` minor.
pub struct SeriesParallel;

impl BasisStrategy for SeriesParallel {
    fn name(&self) -> &'static str {
        "series-parallel"
    }

    fn generate(&self, g: &Graph, config: &StrategyConfig) -> Result<GeneratingSet> {
        let cc = ConstructConfig { verify_degree: config.max_degree, fiber_cap: config.fiber_cap };
        Ok(quadratic_basis_sp_with(g, &cc)?.set)
    }
}

/// Every kernel quadric.
pub struct AllQuadrics;

impl BasisStrategy for AllQuadrics {
    fn name(&self) -> &'static str {
        "all-quadrics"
    }

    fn generate(&self, g: &Graph, config: &StrategyConfig) -> Result<GeneratingSet> {
        all_kernel_quadrics(g, config.fiber_cap)
    }
}

pub struct StrategyRegistry {
    entries: Vec<Box<dyn BasisStrategy>>,
}

impl StrategyRegistry {
    pub fn new() -> Self {
        StrategyRegistry { entries: Vec::new() }
    }

    /// Replaces any strategy registered under the same name.
    pub fn register(&mut self, s: Box<dyn BasisStrategy>) {
        self.entries.retain(|e| e.name() != s.name());
        self.entries.push(s);
    }

    pub fn get(&self, name: &str) -> Result<&dyn BasisStrategy> {
        self.entries
            .iter()
            .find(|e| e.name() == name)
            .map(|e| e.as_ref())
            .ok_or_else(|| Error::UnknownStrategy(name.to_string()))
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.entries.iter().map(|e| e.name()).collect()
    }

    /// `series-parallel` when the graph is `K4`-minor-free, else `all-quadrics`.
    pub fn quadratic_for(&self, g: &Graph) -> Result<&dyn BasisStrategy> {
        self.get(if is_k4_minor_free(g) { "series-parallel" } else { "all-quadrics" })
    }
}

impl Default for StrategyRegistry {
    fn default() -> Self {
        let mut r = StrategyRegistry::new();
        r.register(Box::new(Oracle));
        r.register(Box::new(SeriesParallel));
        r.register(Box::new(AllQuadrics));
        r
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::oracle::generates_up_to_degree;

    #[test]
    fn registry_lookup() {
        let r = StrategyRegistry::default();
        assert_eq!(r.names(), vec!["oracle", "series-parallel", "all-quadrics"]);
        assert_eq!(r.get("nope").err(), Some(Error::UnknownStrategy("nope".into())));
        assert_eq!(r.quadratic_for(&catalog::cycle(5)).unwrap().name(), "series-parallel");
        assert_eq!(r.quadratic_for(&catalog::complete(4)).unwrap().name(), "all-quadrics");
    }

    #[test]
    fn strategies_agree_on_p4() {
        let r = StrategyRegistry::default();
        let g = catalog::path(4);
        let cfg = StrategyConfig::default();
        for name in r.names() {
            let set = r.get(name).unwrap().generate(&g, &cfg).unwrap();
            assert!(set.max_degree() <= 2, "{name}");
            assert!(generates_up_to_degree(&g, &set, 4, cfg.fiber_cap).unwrap().generates, "{name}");
        }
    }

    #[test]
    fn register_replaces_by_name() {
        let mut r = StrategyRegistry::default();
        r.register(Box::new(Oracle));
        assert_eq!(r.names().len(), 3);
    }
}
