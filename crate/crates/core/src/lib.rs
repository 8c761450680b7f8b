#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod algebra;
pub mod codes;
pub mod gf;
pub mod hulldim;
pub mod matrix;
pub mod num;
pub mod polyring;
pub mod quantum;
