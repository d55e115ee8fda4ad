//! Ket-sum formulas such as `½(|0000⟩+|0110⟩+|1001⟩−|1111⟩)`.

use num_complex::Complex64;

use crate::state::{named_state, StateError, StateVector};

const AMP_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum FormulaError {
    #[error("cannot parse formula {formula:?}: {reason}")]
    Syntax { formula: String, reason: String },
    #[error(transparent)]
    State(#[from] StateError),
}

/// Canonical text of a state: kets in increasing binary order, global phase
/// chosen so the first nonzero amplitude is positive real, and a common
/// prefactor `½`, `1/s` or `1/√k` when all magnitudes agree.
pub fn format_formula(state: &StateVector) -> String {
    let terms: Vec<(usize, Complex64)> = state
        .amps()
        .iter()
        .enumerate()
        .filter(|(_, a)| a.norm() > AMP_TOL)
        .map(|(i, a)| (i, *a))
        .collect();
    let Some(&(_, lead)) = terms.first() else {
        return "0".to_string();
    };
    let phase = lead / lead.norm();
    let terms: Vec<(usize, Complex64)> = terms.into_iter().map(|(i, a)| (i, a / phase)).collect();
    let ket = |i: usize| format!("|{:0width$b}⟩", i, width = state.n());
    let real = terms.iter().all(|(_, a)| a.im.abs() < AMP_TOL);
    let magnitude = terms[0].1.norm();
    let uniform = real && terms.iter().all(|(_, a)| (a.norm() - magnitude).abs() < AMP_TOL);
    let k = 1.0 / (magnitude * magnitude);
    if uniform && (k - k.round()).abs() < 1e-6 {
        let k = k.round() as u64;
        let mut body = String::new();
        for (n, (i, a)) in terms.iter().enumerate() {
            if a.re < 0.0 {
                body.push('−');
            } else if n > 0 {
                body.push('+');
            }
            body.push_str(&ket(*i));
        }
        if k == 1 {
            return body;
        }
        let root = (k as f64).sqrt().round() as u64;
        let prefix = match (root * root == k, root) {
            (true, 2) => "½".to_string(),
            (true, s) => format!("1/{s}"),
            (false, _) => format!("1/√{k}"),
        };
        return format!("{prefix}({body})");
    }
    let mut out = String::new();
    for (n, (i, a)) in terms.iter().enumerate() {
        if a.im.abs() < AMP_TOL {
            if a.re < 0.0 {
                out.push('−');
            } else if n > 0 {
                out.push('+');
            }
            out.push_str(&format!("{:.6}", a.re.abs()));
        } else {
            if n > 0 {
                out.push('+');
            }
            out.push_str(&format!("({:.6}{:+.6}i)", a.re, a.im).replace('-', "−"));
        }
        out.push_str(&ket(*i));
    }
    out
}

/// A parsed printed formula before normalization.
#[derive(Debug, Clone, PartialEq)]
pub struct ParsedFormula {
    /// Norm of the formula exactly as written.
    pub printed_norm: f64,
    pub state: StateVector,
}

impl ParsedFormula {
    /// True when the written prefactor already gives a unit vector.
    pub fn is_normalized(&self) -> bool {
        (self.printed_norm - 1.0).abs() < 1e-9
    }
}

/// Parses formulas in ASCII or Unicode form: `1/2(|00>+|11>)`,
/// `1/sqrt2(|psi+0>-|psi-1>)`, `½[+|001⟩|φ−⟩ ...]`, `1/√2(...)`.
/// Bell tokens `phi±`/`psi±` may carry trailing computational bits.
pub fn parse_formula(text: &str) -> Result<ParsedFormula, FormulaError> {
    let err = |reason: &str| FormulaError::Syntax {
        formula: text.to_string(),
        reason: reason.to_string(),
    };
    let s = text
        .replace('⟩', ">")
        .replace(['−', '–'], "-")
        .replace('½', "1/2")
        .replace('√', "sqrt")
        .replace('φ', "phi")
        .replace('ψ', "psi")
        .replace(char::is_whitespace, "");
    let (prefactor, body) = split_prefactor(&s).ok_or_else(|| err("bad prefactor"))?;
    let body = body.trim_matches(|c| matches!(c, '(' | ')' | '[' | ']'));
    let mut chars = body.chars().peekable();
    let mut total: Option<Vec<Complex64>> = None;
    while chars.peek().is_some() {
        let mut sign = 1.0;
        while let Some(&c) = chars.peek() {
            match c {
                '+' => {}
                '-' => sign = -sign,
                _ => break,
            }
            chars.next();
        }
        let mut term: Option<Vec<Complex64>> = None;
        while chars.peek() == Some(&'|') {
            chars.next();
            let token: String = chars.by_ref().take_while(|&c| c != '>').collect();
            let factor = ket_token(&token).ok_or_else(|| err(&format!("bad ket |{token}>")))?;
            term = Some(match term {
                None => factor,
                Some(t) => kron(&t, &factor),
            });
        }
        let mut term = term.ok_or_else(|| err("expected a ket"))?;
        term.iter_mut().for_each(|a| *a *= sign * prefactor);
        total = Some(match total {
            None => term,
            Some(mut acc) if acc.len() == term.len() => {
                acc.iter_mut().zip(&term).for_each(|(a, b)| *a += b);
                acc
            }
            Some(_) => return Err(err("terms have different qubit counts")),
        });
    }
    let amps = total.ok_or_else(|| err("empty formula"))?;
    let printed_norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    Ok(ParsedFormula {
        printed_norm,
        state: StateVector::normalized(amps)?,
    })
}

fn split_prefactor(s: &str) -> Option<(f64, &str)> {
    let Some(rest) = s.strip_prefix("1/") else {
        return Some((1.0, s));
    };
    let (root, rest) = match rest.strip_prefix("sqrt") {
        Some(r) => (true, r),
        None => (false, rest),
    };
    let digits = rest.chars().take_while(char::is_ascii_digit).count();
    let value: f64 = rest[..digits].parse().ok()?;
    let value = if root { value.sqrt() } else { value };
    Some((1.0 / value, &rest[digits..]))
}

fn ket_token(token: &str) -> Option<Vec<Complex64>> {
    for (prefix, name) in [
        ("phi+", "phi_plus"),
        ("phi-", "phi_minus"),
        ("psi+", "psi_plus"),
        ("psi-", "psi_minus"),
    ] {
        if let Some(bits) = token.strip_prefix(prefix) {
            let pair = named_state(name).ok()?.amps().to_vec();
            return Some(if bits.is_empty() {
                pair
            } else {
                kron(&pair, &ket_token(bits)?)
            });
        }
    }
    if token.is_empty() || !token.chars().all(|c| c == '0' || c == '1') {
        return None;
    }
    let mut v = vec![Complex64::new(0.0, 0.0); 1 << token.len()];
    v[usize::from_str_radix(token, 2).ok()?] = Complex64::new(1.0, 0.0);
    Some(v)
}

fn kron(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    a.iter().flat_map(|x| b.iter().map(move |y| x * y)).collect()
}
