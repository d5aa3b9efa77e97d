//! Default resource bounds. Every bound here is a knob: operations that can
//! blow up take the bound as an explicit argument, and these constants are
//! what the convenience wrappers and the CLI defaults use.

/// Largest group order the table-backed constructors accept by default.
pub const DEFAULT_ORDER_BOUND: u64 = 20160;

/// Default live-coset bound for coset enumeration.
pub const DEFAULT_MAX_COSETS: usize = 1_000_000;

/// Order cutoff above which the non-abelian isomorphism search refuses.
pub const DEFAULT_ISO_ORDER_BOUND: u64 = 2000;

/// Node budget for the isomorphism backtracking search.
pub const DEFAULT_ISO_NODE_BUDGET: u64 = 5_000_000;

/// Generator cutoff for eagerly computed auxiliary tensor presentations.
pub const DEFAULT_TENSOR_GENERATOR_BOUND: usize = 4096;
