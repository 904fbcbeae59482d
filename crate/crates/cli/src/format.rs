//! Fixed, platform-independent text output.

use std::fmt::Write;

use qwalk_core::ProbabilityVector;

/// Formats like C's `%.17g`: 17 significant digits, trailing zeros removed,
/// scientific notation when the decimal exponent is below -4 or at least 17.
pub fn g17(x: f64) -> String {
    if x == 0.0 {
        return "0".to_owned();
    }
    if !x.is_finite() {
        return if x.is_nan() {
            "nan".to_owned()
        } else if x > 0.0 {
            "inf".to_owned()
        } else {
            "-inf".to_owned()
        };
    }
    let sci = format!("{:.16e}", x.abs());
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    let sign = if x < 0.0 { "-" } else { "" };
    let digits: String = mantissa.chars().filter(|c| *c != '.').collect();

    if !(-4..17).contains(&exp) {
        let (lead, rest) = digits.split_at(1);
        let rest = rest.trim_end_matches('0');
        let dot = if rest.is_empty() { "" } else { "." };
        let esign = if exp < 0 { '-' } else { '+' };
        return format!("{sign}{lead}{dot}{rest}e{esign}{:02}", exp.abs());
    }
    let (int_part, frac_part) = if exp >= 0 {
        let split = exp as usize + 1;
        (digits[..split].to_owned(), digits[split..].to_owned())
    } else {
        let zeros = "0".repeat((-exp - 1) as usize);
        ("0".to_owned(), format!("{zeros}{digits}"))
    };
    let frac = frac_part.trim_end_matches('0');
    if frac.is_empty() {
        format!("{sign}{int_part}")
    } else {
        format!("{sign}{int_part}.{frac}")
    }
}

pub const CSV_HEADER: &str = "step,vertex,probability";

/// Distribution CSV shared by the quantum and classical walks. `steps`
/// pairs each recorded step number with its distribution. The last line is a
/// comment echoing the total probability of the final recorded step.
pub fn distribution_csv(steps: &[(usize, ProbabilityVector)]) -> String {
    let mut out = String::new();
    out.push_str(CSV_HEADER);
    out.push('\n');
    for (t, p) in steps {
        for (k, prob) in p.probs().iter().enumerate() {
            writeln!(out, "{t},{k},{}", g17(*prob)).expect("write to String");
        }
    }
    let total = steps.last().map_or(0.0, |(_, p)| p.total());
    writeln!(out, "# total_probability={}", g17(total)).expect("write to String");
    out
}
