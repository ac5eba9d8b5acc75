pub mod algorithm1;
pub mod balanced;
pub mod bounds;
pub mod chain;
pub mod coloring;
pub mod error;
pub mod experiments;
pub mod hypergraph;
pub mod interval;
pub mod oracle;
pub mod rebalance;
pub mod seed;
pub mod solver;
