use std::collections::BTreeMap;

use crate::ast::{ident, Identifier};
use crate::statics::{FunTable, FunType};
use crate::value::{StringAlignment, Value};

/// A built-in function: its arity and a pure evaluation function.
#[derive(Debug, Clone, Copy)]
pub struct Builtin {
    pub ty: FunType,
    pub eval: fn(&[Value]) -> Vec<Value>,
}

/// Built-in functions plus dialect-level options.
#[derive(Debug, Clone, Default)]
pub struct Dialect {
    pub builtins: BTreeMap<Identifier, Builtin>,
    pub string_alignment: StringAlignment,
}

fn bool_value(b: bool) -> Value {
    if b {
        Value::one()
    } else {
        Value::zero()
    }
}

fn shift_amount(shift: Value) -> Option<usize> {
    (shift < Value::from(256)).then(|| shift.as_usize())
}

fn apply2(f: fn(Value, Value) -> Value, args: &[Value]) -> Vec<Value> {
    vec![f(args[0], args[1])]
}

macro_rules! binary_builtin {
    ($f:expr) => {
        Builtin {
            ty: FunType { inputs: 2, outputs: 1 },
            eval: |args| apply2($f, args),
        }
    };
}

impl Dialect {
    /// No built-in functions.
    pub fn none() -> Self {
        Dialect::default()
    }

    /// Pure arithmetic, comparison and bitwise EVM operations on 256-bit words.
    /// Division and modulo by zero yield zero.
    pub fn evm_pure() -> Self {
        let entries: [(&str, Builtin); 15] = [
            ("add", binary_builtin!(|a, b| a.overflowing_add(b).0)),
            ("sub", binary_builtin!(|a, b| a.overflowing_sub(b).0)),
            ("mul", binary_builtin!(|a, b| a.overflowing_mul(b).0)),
            ("div", binary_builtin!(|a, b| if b.is_zero() { Value::zero() } else { a / b })),
            ("mod", binary_builtin!(|a, b| if b.is_zero() { Value::zero() } else { a % b })),
            ("lt", binary_builtin!(|a, b| bool_value(a < b))),
            ("gt", binary_builtin!(|a, b| bool_value(a > b))),
            ("eq", binary_builtin!(|a, b| bool_value(a == b))),
            ("and", binary_builtin!(|a, b| a & b)),
            ("or", binary_builtin!(|a, b| a | b)),
            ("xor", binary_builtin!(|a, b| a ^ b)),
            ("shl", binary_builtin!(|shift, v| shift_amount(shift).map_or(Value::zero(), |s| v << s))),
            ("shr", binary_builtin!(|shift, v| shift_amount(shift).map_or(Value::zero(), |s| v >> s))),
            (
                "iszero",
                Builtin {
                    ty: FunType::new(1, 1),
                    eval: |args| vec![bool_value(args[0].is_zero())],
                },
            ),
            (
                "not",
                Builtin {
                    ty: FunType::new(1, 1),
                    eval: |args| vec![!args[0]],
                },
            ),
        ];
        Dialect {
            builtins: entries.into_iter().map(|(name, b)| (ident(name), b)).collect(),
            string_alignment: StringAlignment::Integer,
        }
    }

    pub fn with_string_alignment(mut self, alignment: StringAlignment) -> Self {
        self.string_alignment = alignment;
        self
    }

    /// Arities of the built-ins, for the static checker.
    pub fn fun_table(&self) -> FunTable {
        self.builtins.iter().map(|(name, b)| (name.clone(), b.ty)).collect()
    }
}
