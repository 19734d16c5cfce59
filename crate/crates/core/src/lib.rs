//! Numerical experiments on escaping sets of affine-exponential entire
//! functions `z ↦ a·e^{bz} + cz + d` and their compositions.

pub mod function;
pub mod harness;
pub mod orbit;
pub mod parse;
pub mod raster;
pub mod singular;

pub use function::{commutes_numerically, ComplexPoint, ExprError, FunctionExpr, Value};
pub use orbit::{classify, Certificate, Classification, EscapeConfig, OrbitRecord, Verdict, Window};
pub use parse::{parse_complex, parse_expr};
