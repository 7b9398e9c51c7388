//! Finite fields, rational functions and Artin-Schreier curve machinery.

mod error;
pub mod gf;
pub mod poly;
pub mod ratfun;
pub mod asgenus;
pub mod families;
pub mod nfalg;
pub mod zeta;

pub use error::{Error, Result};
pub use gf::{FieldCtx, FieldElem};
pub use poly::Poly;
pub use ratfun::{Divisor, LaurentSeries, Place, RatFun};
pub use asgenus::{abelian_invariants, AbelianASSpec, InvariantsReport};
pub use families::{
    expected_invariants, verify_family_identities, Family, FamilySpec, IdentityReport,
};
pub use nfalg::{
    check_relations_and_structure, family_closure, AutoMap, GroupReport, NFElem, NfCtx,
    StructureReport,
};
pub use zeta::{zeta_report, CountSeries, LPoly, ZetaReport};
