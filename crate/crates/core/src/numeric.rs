//! Text form of complex numbers: `0.5`, `-i`, `2.5i`, `1+2i`, `0.6-0.8i`.

use num_complex::Complex64;

pub fn parse_complex(token: &str) -> Option<Complex64> {
    let t: String = token.chars().filter(|c| !c.is_whitespace()).collect();
    if t.is_empty() {
        return None;
    }
    let Some(body) = t.strip_suffix('i') else {
        return t.parse::<f64>().ok().map(|re| Complex64::new(re, 0.0));
    };
    // split at the last sign that is not the leading one and not part of an exponent
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(k) => (body[..k].parse::<f64>().ok()?, imag_coeff(&body[k..])?),
        None => (0.0, imag_coeff(body)?),
    };
    Some(Complex64::new(re, im))
}

fn imag_coeff(s: &str) -> Option<f64> {
    match s {
        "" | "+" => Some(1.0),
        "-" => Some(-1.0),
        _ => s.parse().ok(),
    }
}

pub fn format_complex(z: Complex64) -> String {
    if z.im == 0.0 {
        format!("{}", z.re)
    } else if z.re == 0.0 {
        format!("{}i", z.im)
    } else {
        format!("{}{:+}i", z.re, z.im)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_common_forms() {
        assert_eq!(parse_complex("0.5"), Some(Complex64::new(0.5, 0.0)));
        assert_eq!(parse_complex("-i"), Some(Complex64::new(0.0, -1.0)));
        assert_eq!(parse_complex("i"), Some(Complex64::new(0.0, 1.0)));
        assert_eq!(parse_complex("2.5i"), Some(Complex64::new(0.0, 2.5)));
        assert_eq!(parse_complex("1+2i"), Some(Complex64::new(1.0, 2.0)));
        assert_eq!(parse_complex("0.6 - 0.8i"), Some(Complex64::new(0.6, -0.8)));
        assert_eq!(parse_complex("1e-3-2e-3i"), Some(Complex64::new(1e-3, -2e-3)));
        assert_eq!(parse_complex("-1-i"), Some(Complex64::new(-1.0, -1.0)));
        assert_eq!(parse_complex("abc"), None);
        assert_eq!(parse_complex(""), None);
    }

    #[test]
    fn format_round_trips() {
        for z in [Complex64::new(0.25, 0.0), Complex64::new(0.0, -3.0), Complex64::new(-1.5, 2.0)] {
            assert_eq!(parse_complex(&format_complex(z)), Some(z));
        }
    }
}
