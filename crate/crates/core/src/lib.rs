//! Parser, static checker, interpreter, transformations and translation
//! validation for the Yul intermediate language.

pub mod ast;
pub mod dynamics;
pub mod renaming;
pub mod solc_json;
pub mod statics;
pub mod syntax;
pub mod testgen;
pub mod transforms;
pub mod value;
