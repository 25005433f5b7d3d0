//! Modeling and simulation toolkit for a vertical-nanowire 3-D circuit fabric.
//!
//! - [`interconnect`]: Rent's-rule wire-length distributions (2-D and stacked)
//! - [`repeater`]: wire delay, optimal repeater sizing, tier classification
//! - [`thermal`]: transistor-level steady-state thermal networks
//! - [`dynlogic`]: phase-accurate simulator for clocked dynamic NAND logic
//! - [`designs`]: adder, multiplier, memory-cell and CPU generators
//! - [`layout`]: nanowire placement, area and sensitivity sweeps
//! - [`accept`]: the acceptance checks and their result table

// `!(x > 0.0)` deliberately rejects NaN along with non-positive values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod accept;
pub mod config;
pub mod designs;
pub mod dynlogic;
pub mod interconnect;
pub mod layout;
pub mod repeater;
pub mod thermal;
