//! Textual algebra descriptions such as `tensor(jet:2,whitney(tan:1,trunc:2,1))`.

use super::{make_algebra, Preset, WeilAlgebra, WeilError};
use crate::scalars::Ring;

struct Cursor<'a> {
    text: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn skip_ws(&mut self) {
        while self.text[self.pos..].starts_with(char::is_whitespace) {
            self.pos += 1;
        }
    }

    fn eat(&mut self, token: &str) -> bool {
        self.skip_ws();
        if self.text[self.pos..].starts_with(token) {
            self.pos += token.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, token: &str) -> Result<(), WeilError> {
        if self.eat(token) {
            Ok(())
        } else {
            Err(self.error(&format!("expected {token:?}")))
        }
    }

    fn number(&mut self) -> Result<u32, WeilError> {
        self.skip_ws();
        let digits: String = self.text[self.pos..].chars().take_while(char::is_ascii_digit).collect();
        if digits.is_empty() {
            return Err(self.error("expected a nonnegative integer"));
        }
        self.pos += digits.len();
        digits.parse().map_err(|_| self.error("integer out of range"))
    }

    fn error(&self, msg: &str) -> WeilError {
        WeilError::InvalidPreset(format!("{msg} at position {} in {:?}", self.pos, self.text))
    }

    fn spec(&mut self, ring: &Ring) -> Result<WeilAlgebra, WeilError> {
        for (name, whitney) in [("tensor(", false), ("whitney(", true)] {
            if self.eat(name) {
                let a = self.spec(ring)?;
                self.expect(",")?;
                let b = self.spec(ring)?;
                self.expect(")")?;
                return if whitney { WeilAlgebra::whitney_sum(&a, &b) } else { WeilAlgebra::tensor(&a, &b) };
            }
        }
        let preset = if self.eat("jet:") {
            Preset::Jet(self.number()?)
        } else if self.eat("tan:") {
            Preset::Tangent(self.number()?)
        } else if self.eat("trunc:") {
            let n = self.number()?;
            self.expect(",")?;
            Preset::Truncated(n as usize, self.number()?)
        } else {
            return Err(self.error("expected jet:, tan:, trunc:, tensor( or whitney("));
        };
        make_algebra(&preset, ring)
    }
}

/// Parses the algebra grammar
/// `spec := jet:k | tan:k | trunc:n,r | tensor(spec,spec) | whitney(spec,spec)`.
pub fn parse_algebra_spec(text: &str, ring: &Ring) -> Result<WeilAlgebra, WeilError> {
    let mut c = Cursor { text, pos: 0 };
    let alg = c.spec(ring)?;
    c.skip_ws();
    if c.pos != text.len() {
        return Err(c.error("trailing input"));
    }
    Ok(alg)
}
