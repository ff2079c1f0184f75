//! Small named instances used throughout the tests, the CLI examples and the
//! README.

use crate::instance::{parse_instance, Instance};

/// Six `A` operations of degree two, seven `B` operations, two of them pendant.
pub const EX1_TEXT: &str = include_str!("../fixtures/ex1.cd");

/// One `A` operation feeding one of three `B` operations.
pub const CEX_TEXT: &str = include_str!("../fixtures/cex.cd");

pub fn ex1() -> Instance {
    parse_instance(EX1_TEXT).expect("bundled fixture parses")
}

pub fn cex() -> Instance {
    parse_instance(CEX_TEXT).expect("bundled fixture parses")
}
