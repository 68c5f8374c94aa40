//! 256-bit values and the meaning of literals.

use crate::ast::Literal;

pub use primitive_types::U256 as Value;

/// How the bytes of a string literal become a 256-bit value.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum StringAlignment {
    /// Big-endian base-256 integer of the bytes, no padding: `"a"` is 97.
    #[default]
    Integer,
    /// Bytes left-aligned in a 32-byte word (right zero padding), as solc does.
    LeftAligned32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LiteralError {
    TooLarge,
    StringTooLong,
}

/// Evaluates a literal. Fails when the literal denotes 2^256 or more.
pub fn literal_value(lit: &Literal, alignment: StringAlignment) -> Result<Value, LiteralError> {
    match lit {
        Literal::True => Ok(Value::one()),
        Literal::False => Ok(Value::zero()),
        Literal::DecNumber(digits) => Value::from_dec_str(digits).map_err(|_| LiteralError::TooLarge),
        Literal::HexNumber(digits) => {
            let significant = digits.trim_start_matches('0');
            if significant.len() > 64 {
                return Err(LiteralError::TooLarge);
            }
            if significant.is_empty() {
                return Ok(Value::zero());
            }
            Value::from_str_radix(significant, 16).map_err(|_| LiteralError::TooLarge)
        }
        Literal::PlainString(_) | Literal::HexString(_) => {
            let bytes = lit.string_bytes().expect("string literal");
            if bytes.len() > 32 {
                return Err(LiteralError::StringTooLong);
            }
            Ok(match alignment {
                StringAlignment::Integer => Value::from_big_endian(&bytes),
                StringAlignment::LeftAligned32 => {
                    let mut word = [0u8; 32];
                    word[..bytes.len()].copy_from_slice(&bytes);
                    Value::from_big_endian(&word)
                }
            })
        }
    }
}

/// Parses a decimal or `0x`-prefixed hexadecimal value.
pub fn parse_value(text: &str) -> Option<Value> {
    match text.strip_prefix("0x") {
        Some(hex) if !hex.is_empty() && hex.chars().all(|c| c.is_ascii_hexdigit()) => {
            literal_value(&Literal::hex(hex), StringAlignment::Integer).ok()
        }
        Some(_) => None,
        None if !text.is_empty() && text.chars().all(|c| c.is_ascii_digit()) => Value::from_dec_str(text).ok(),
        None => None,
    }
}
