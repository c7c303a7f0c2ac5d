//! Factories for the counterexample families: induced modules over
//! semidirect products, generalized wreath products certified explicitly or
//! through their quotients, L2(q) machinery with subgroup finders and coset
//! scanners, and tamper-evident obstruction certificates.

pub mod certificate;
pub mod example1;
pub mod psl2;
pub mod taylor;
pub mod wreath;

pub use certificate::{
    certify_coset, replay, CertifiedMember, ImplicitProduct, ObstructionCertificate,
    MODE_EXPLICIT, MODE_QUOTIENT_LIFTED,
};
pub use example1::{build_example1, s3_matrix_gens, Example1};
pub use psl2::{
    a4_subgroup_psl2, dihedral_subgroup_psl2, odd_prime_power, psl2, psl2_order,
    scan_coset_witness, scan_psl2_family, scan_sylow_coset, FamilyScanOutcome, FamilyScanRecord,
};
pub use taylor::{build_taylor_example, TaylorOutcome, TaylorReport, TaylorSkip, TAYLOR_EVEN_Q};
pub use wreath::{
    build_wreath_example, WreathChecks, WreathOutcome, EXPLICIT_WREATH_LIMIT,
};
