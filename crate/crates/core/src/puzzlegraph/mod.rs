//! Implicit puzzle graphs: vertices are configurations, edges are single
//! slides. Components are explored breadth-first over packed states.

pub mod bfs;
pub mod codec;
pub mod diameter;
pub mod dot;
pub mod group;
pub mod path;
pub mod placements;

use thiserror::Error;

use crate::configuration::ConfigError;

pub use bfs::{
    count_components, enumerate_component, explore_component, ComponentSummary, ExploredComponent,
};
pub use codec::StateCodec;
pub use diameter::{
    exact_gods_number, gods_number_bounds, placement_depths, GodsNumberBounds, PlacementDepth,
};
pub use dot::export_dot;
pub use path::shortest_path;

/// Default cap on visited states for one search.
pub const DEFAULT_BUDGET: u64 = 50_000_000;

/// Environment variable overriding [`DEFAULT_BUDGET`].
pub const BUDGET_ENV: &str = "HEXSLIDE_BUDGET";

/// Cap on the number of states a search may visit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget(pub u64);

impl Budget {
    /// `HEXSLIDE_BUDGET` if set and valid, otherwise the default.
    pub fn from_env() -> Budget {
        std::env::var(BUDGET_ENV)
            .ok()
            .and_then(|v| v.trim().parse().ok())
            .map(Budget)
            .unwrap_or_default()
    }

    pub fn unlimited() -> Budget {
        Budget(u64::MAX)
    }
}

impl Default for Budget {
    fn default() -> Self {
        Budget(DEFAULT_BUDGET)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("state-space budget of {budget} states exceeded")]
    BudgetExceeded { budget: u64 },
    #[error(
        "board with {cells} cells and {bits}-bit labels does not fit the 128-bit state encoding"
    )]
    StateTooWide { cells: usize, bits: u32 },
    #[error("{total} is not divisible by the home count {home_count}")]
    DivisionNotExact { total: u128, home_count: u64 },
    #[error("no non-isolated configuration exists with {h} holes")]
    NoNonIsolated { h: usize },
    #[error("start configuration is isolated")]
    IsolatedStart,
    #[error("component has more than {limit} states")]
    ComponentTooLarge { limit: u64 },
    #[error("count overflows 128 bits")]
    Overflow,
    #[error(transparent)]
    Config(#[from] ConfigError),
}

/// `n!` if it fits in 128 bits.
pub fn factorial(n: usize) -> Option<u128> {
    (1..=n as u128).try_fold(1u128, |acc, k| acc.checked_mul(k))
}

/// Binomial coefficient `C(n, k)` if it fits in 128 bits.
pub fn binomial(n: u64, k: u64) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.checked_mul((n - i) as u128)? / (i as u128 + 1);
    }
    Some(acc)
}
