//! Geometric and topological phases of two-qudit pure states under local
//! `SU(d) × SU(d)` evolution.
//!
//! A state `|ψ⟩ = Σ α_ij |i⟩|j⟩` is carried as its coefficient matrix and
//! evolves as `α → U_A α U_Bᵀ`. Along a sampled path the crate computes the
//! total, dynamical and geometric phases, detects orthogonality crossings
//! and unwraps jumps, and classifies cyclic evolutions by the `2π/d`
//! lattice of their geometric phase.
//!
//! | module | contents |
//! |---|---|
//! | [`matcore`] | small dense complex matrices, Hermitian eigensolver, exponentials, polar split |
//! | [`sud`] | `SU(d)` generator basis, structure constants, adjoint map |
//! | [`qstate`] | states, reduced densities, invariants, concurrence, polar sectors |
//! | [`evolution`] | unitary paths, phase pipeline, traces, closed forms |
//! | [`topology`] | cyclicity, quantization, homotopy classes, unwrapping |
//! | [`scenario`] | named runs behind the `fracphase` binary |
//!
//! Runnable examples, one per capability:
//!
//! ```text
//! cargo run --example qubit_overlaps        # two-qubit overlap curves
//! cargo run --example qutrit_paths          # smooth vs piecewise qutrit paths
//! cargo run --example quantization_audit    # Δφ on the 2π/d lattice
//! cargo run --example dynamical_vanishing   # φ_dyn = 0 at maximal entanglement
//! cargo run --example solid_angle           # frame functional on cone loops
//! cargo run --example polar_sectors         # α = 𝒟^{1/d} e^{iφ} e^M S̄
//! cargo run --example generators            # SU(d) basis and adjoint map
//! cargo run --example formula_audit         # qudit phase expressions vs numerics
//! cargo run --example trace_csv             # CSV output and re-unwrapping
//! cargo run --example scenario_report       # scenarios from library code
//! ```

pub mod evolution;
pub mod matcore;
pub mod qstate;
pub mod quadrature;
pub mod random;
pub mod scenario;
pub mod sud;
pub mod topology;
