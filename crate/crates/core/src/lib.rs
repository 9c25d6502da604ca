pub mod arith;
pub mod cyclotomic;
pub mod duadic;
pub mod exec;
pub mod field;
pub mod gf2;
pub mod golden;
pub mod linear_code;
pub mod matrix;
pub mod poly_code;
pub mod quantum;
