use std::fmt;
use std::str::FromStr;

use crate::error::CliError;

/// Primes with a compiled field backend.
pub const PRIMES: [u64; 8] = [2, 3, 5, 7, 11, 13, 65521, 2147483647];

/// Coefficient field picked at run time.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FieldChoice {
    #[default]
    Rational,
    Prime(u64),
}

impl FromStr for FieldChoice {
    type Err = CliError;

    /// `rational` (or `Q`), `mod p`, `F_p`, `GF(p)` or a bare prime.
    fn from_str(s: &str) -> Result<Self, CliError> {
        let t = s.trim().to_ascii_lowercase();
        if matches!(t.as_str(), "rational" | "rationals" | "q") {
            return Ok(FieldChoice::Rational);
        }
        let digits = t
            .strip_prefix("mod")
            .or_else(|| t.strip_prefix("f_"))
            .or_else(|| t.strip_prefix("gf(").and_then(|r| r.strip_suffix(')')))
            .unwrap_or(&t)
            .trim();
        let p: u64 = digits
            .parse()
            .map_err(|_| CliError::Usage(format!("unknown field `{s}`; use `rational` or `mod p`")))?;
        if !PRIMES.contains(&p) {
            return Err(CliError::Usage(format!(
                "no backend for the field mod {p}; supported primes: {}",
                PRIMES.map(|p| p.to_string()).join(", ")
            )));
        }
        Ok(FieldChoice::Prime(p))
    }
}

impl fmt::Display for FieldChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldChoice::Rational => f.write_str("rational"),
            FieldChoice::Prime(p) => write!(f, "mod {p}"),
        }
    }
}

/// Runs `$body` with the type alias `$f` bound to the chosen field.
#[macro_export]
macro_rules! with_field {
    ($choice:expr, $f:ident => $body:expr) => {
        match $choice {
            $crate::field::FieldChoice::Rational => {
                type $f = ::injres::Rational;
                $body
            }
            $crate::field::FieldChoice::Prime(2) => {
                type $f = ::injres::Fp<2>;
                $body
            }
            $crate::field::FieldChoice::Prime(3) => {
                type $f = ::injres::Fp<3>;
                $body
            }
            $crate::field::FieldChoice::Prime(5) => {
                type $f = ::injres::Fp<5>;
                $body
            }
            $crate::field::FieldChoice::Prime(7) => {
                type $f = ::injres::Fp<7>;
                $body
            }
            $crate::field::FieldChoice::Prime(11) => {
                type $f = ::injres::Fp<11>;
                $body
            }
            $crate::field::FieldChoice::Prime(13) => {
                type $f = ::injres::Fp<13>;
                $body
            }
            $crate::field::FieldChoice::Prime(65521) => {
                type $f = ::injres::Fp<65521>;
                $body
            }
            $crate::field::FieldChoice::Prime(2147483647) => {
                type $f = ::injres::Fp<2147483647>;
                $body
            }
            $crate::field::FieldChoice::Prime(p) => {
                Err($crate::error::CliError::Usage(format!("no backend for the field mod {p}")))
            }
        }
    };
}
