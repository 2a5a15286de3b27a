//! Truncated formal power series in one and two variables.

mod series1;
mod series2;
mod ut;
mod valuated;

pub use series1::{s1_arith, ArithOp, Series1};
pub use series2::{s2_arith, Series2};
pub use ut::{ut_inverse, ut_mul, UTGammaSeries};
pub use valuated::{v2_arith, ValuatedOp, ValuatedSeries2};

/// Spec-level names for the univariate operations.
pub fn s1_reciprocal<C: crate::Coefficient>(f: &Series1<C>) -> crate::Result<Series1<C>> {
    f.reciprocal()
}

pub fn s1_compose<C: crate::Coefficient>(
    f: &Series1<C>,
    g: &Series1<C>,
) -> crate::Result<Series1<C>> {
    f.compose(g)
}

pub fn s1_invert<C: crate::Coefficient>(f: &Series1<C>) -> crate::Result<Series1<C>> {
    f.invert()
}

pub fn s2_reciprocal<C: crate::Coefficient>(f: &Series2<C>) -> crate::Result<Series2<C>> {
    f.reciprocal()
}

pub fn s2_compose_slots<C: crate::Coefficient>(
    f: &Series2<C>,
    g: &Series1<C>,
    h: &Series1<C>,
) -> crate::Result<Series2<C>> {
    f.compose_slots(g, h)
}
