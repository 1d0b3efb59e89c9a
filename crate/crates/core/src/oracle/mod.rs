//! Independent ground truth: brute-force `Ho(Cat)` at n = 1 and `Θ^n` as a
//! congruence quotient of `Δ^n`. Nothing here uses the theta, precat or
//! homcalc machinery.

mod cat;
mod closure;

pub use cat::{
    enumerate_functors, ho_cat_hom, is_equivalence, natural_iso, natural_iso_classes, object_iso_classes, quasi_inverse,
    HoCatHom, IsoClasses,
};
pub use closure::{HomClassTable, RawMorphism, ThetaClosure};
