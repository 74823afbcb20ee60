//! Classical lattice models mapped to (and compiled from) qudit circuits.
//!
//! The toolkit works in both directions:
//!
//! * **Forward**: a classical lattice model (six-vertex, Ising with fields on a
//!   planar circuit graph, q-state Potts, 3D Z2 lattice gauge theory) is mapped
//!   to a qudit circuit whose matrix element `⟨L|C|R⟩` (or `q^n⟨+|C|+⟩`, or
//!   `Tr C`, depending on boundary conditions) reproduces the partition
//!   function `Z` up to a tracked normalization `κ`.
//! * **Backward**: a quantum circuit over the models' native gate alphabets is
//!   compiled into a concrete lattice instance plus `κ` such that `Z/κ` equals
//!   the circuit's matrix element.
//!
//! Every mapping is checked against [`spinlat::brute_force_partition`], an
//! independent sum over all free spin configurations, and the sampling
//! estimators ([`estimate`]) reproduce the matrix elements from simulated
//! measurement statistics.
//!
//! Module map:
//!
//! * [`spinlat`] — the lattice models and the brute-force enumeration oracle.
//! * [`qcirc`] — dense qudit statevector simulation of (non-unitary) circuits.
//! * [`map`] — model → circuit construction for all boundary modes.
//! * [`encodings`] — the encoded universal gate sets and multi-step recipes.
//! * [`compile`] — circuit → lattice instance compilers (the reductions).
//! * [`estimate`] — Hadamard-test and one-clean-qubit trace estimators.
//! * [`schema`] — versioned JSON model/circuit formats.
//! * [`cli`] — the `latcirc` command-line surface.

pub mod cli;
pub mod compile;
pub mod encodings;
pub mod estimate;
pub mod linalg;
pub mod map;
pub mod par;
pub mod qcirc;
pub mod schema;
pub mod spinlat;
pub mod verify;
