//! Exact hexadecimal float text, e.g. `0x1.999999999999ap-4`.

pub fn to_hex(v: f64) -> String {
    assert!(v.is_finite(), "hex encoding of non-finite value");
    let bits = v.to_bits();
    let sign = if bits >> 63 == 1 { "-" } else { "" };
    let exp_bits = ((bits >> 52) & 0x7ff) as i64;
    let mantissa = bits & ((1u64 << 52) - 1);
    if exp_bits == 0 && mantissa == 0 {
        return format!("{sign}0x0p0");
    }
    let (lead, exp) = if exp_bits == 0 { (0, -1022) } else { (1, exp_bits - 1023) };
    let digits = format!("{mantissa:013x}");
    let digits = digits.trim_end_matches('0');
    if digits.is_empty() {
        format!("{sign}0x{lead}p{exp}")
    } else {
        format!("{sign}0x{lead}.{digits}p{exp}")
    }
}

pub fn from_hex(s: &str) -> Option<f64> {
    hexf_parse::parse_hexf64(s, false).ok()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_values() {
        assert_eq!(to_hex(0.1), "0x1.999999999999ap-4");
        assert_eq!(to_hex(1.0), "0x1p0");
        assert_eq!(to_hex(-2.5), "-0x1.4p1");
        assert_eq!(to_hex(0.0), "0x0p0");
        assert_eq!(to_hex(-0.0), "-0x0p0");
        assert_eq!(to_hex(f64::MIN_POSITIVE / 4.0), "0x0.4p-1022");
    }

    #[test]
    fn round_trip() {
        let mut x = 0x1234_5678_9abc_def0u64;
        for _ in 0..10_000 {
            x ^= x << 13;
            x ^= x >> 7;
            x ^= x << 17;
            let v = f64::from_bits(x);
            if !v.is_finite() {
                continue;
            }
            assert_eq!(from_hex(&to_hex(v)).map(f64::to_bits), Some(v.to_bits()), "{v:e}");
        }
        for v in [f64::MAX, f64::MIN_POSITIVE, 5e-324, -5e-324, 1e300, 3.0] {
            assert_eq!(from_hex(&to_hex(v)).map(f64::to_bits), Some(v.to_bits()));
        }
    }
}
