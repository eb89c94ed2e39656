//! Tiny parser for polynomial entries on the command line: sums of terms
//! `c`, `x`, `x^3`, `2*x*t^2`, with `+`/`-` between terms.

use anyhow::{bail, Context, Result};
use qfsplit_core::witt::rings::{CoeffRing, GradedPolyElem, WeightedPolyRing};

pub fn parse_poly(ring: &WeightedPolyRing, input: &str) -> Result<GradedPolyElem> {
    let mut acc = ring.zero();
    let cleaned = input.replace(' ', "");
    if cleaned.is_empty() {
        bail!("empty polynomial");
    }
    // split into signed terms
    let mut terms: Vec<(i64, String)> = Vec::new();
    let mut sign = 1i64;
    let mut cur = String::new();
    for (i, ch) in cleaned.chars().enumerate() {
        match ch {
            '+' | '-' if i > 0 && !cur.is_empty() => {
                terms.push((sign, std::mem::take(&mut cur)));
                sign = if ch == '-' { -1 } else { 1 };
            }
            '-' if cur.is_empty() => sign = -sign,
            '+' if cur.is_empty() => {}
            _ => cur.push(ch),
        }
    }
    if !cur.is_empty() {
        terms.push((sign, cur));
    }
    for (sign, term) in terms {
        let mut coeff: i64 = 1;
        let mut exps = vec![0u32; ring.vars.len()];
        for factor in term.split('*') {
            if factor.is_empty() {
                bail!("empty factor in `{term}`");
            }
            if factor.chars().next().unwrap().is_ascii_digit() {
                coeff = coeff
                    .checked_mul(factor.parse::<i64>().context("bad integer factor")?)
                    .context("coefficient overflow")?;
                continue;
            }
            let (name, exp) = match factor.split_once('^') {
                None => (factor, 1u32),
                Some((n, e)) => (n, e.parse::<u32>().context("bad exponent")?),
            };
            let idx = ring
                .var_index(name)
                .with_context(|| format!("unknown variable `{name}` (declare with --vars)"))?;
            exps[idx] += exp;
        }
        let signed = sign * coeff;
        let residue = signed.rem_euclid(ring.p as i64) as u64;
        let monomial = ring.monomial(residue, exps);
        acc = ring.add(&acc, &monomial);
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use qfsplit_core::rational::{rat, rat_int};

    #[test]
    fn parse_examples() {
        let ring = WeightedPolyRing::new(
            5,
            vec![("x".into(), rat_int(1)), ("t".into(), rat(1, 2))],
        );
        let p = parse_poly(&ring, "2*x^2*t + 3 - x").unwrap();
        assert_eq!(ring.format(&p), "3 + 4*x + 2*x^2*t");
        let q = parse_poly(&ring, "-x + x").unwrap();
        assert!(ring.is_zero(&q));
        assert!(parse_poly(&ring, "y + 1").is_err());
    }
}
