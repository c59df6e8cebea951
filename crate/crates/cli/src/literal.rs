//! Text forms of sequences and integer ranges.

use zharm::harness::{Generator, InputFamily};
use zharm::{Error, FiniteSequence, IntegerInterval, Result};

/// `LO..HI`, both ends inclusive; either may be negative.
pub fn parse_interval(s: &str) -> Result<IntegerInterval> {
    let bad = || Error::Precondition(format!("`{s}` is not a range LO..HI"));
    let (a, b) = s.split_once("..").ok_or_else(bad)?;
    let lo = a.trim().parse().map_err(|_| bad())?;
    let hi = b.trim().parse().map_err(|_| bad())?;
    IntegerInterval::new(lo, hi)
}

/// `delta:K`, `indicator:A..B`, `seq:OFF:v,v,...` or `random:SEED[:INDEX]`.
///
/// `random` takes case `INDEX` (default 0) of the random family with
/// default sizes.
pub fn parse_sequence(s: &str) -> Result<FiniteSequence> {
    let bad = |why: &str| Error::Sequence(format!("`{s}`: {why}"));
    let (head, rest) = s.split_once(':').ok_or_else(|| bad("missing `:`"))?;
    match head {
        "delta" => Ok(FiniteSequence::delta(
            rest.parse().map_err(|_| bad("expected delta:K"))?,
        )),
        "indicator" => Ok(FiniteSequence::indicator(parse_interval(rest)?)),
        "seq" => {
            let (off, vals) = rest
                .split_once(':')
                .ok_or_else(|| bad("expected seq:OFF:v,v,..."))?;
            let off = off.parse().map_err(|_| bad("bad offset"))?;
            let vals = vals
                .split(',')
                .map(|v| v.trim().parse::<f64>().map_err(|_| bad("bad value")))
                .collect::<Result<Vec<_>>>()?;
            FiniteSequence::new(off, vals)
        }
        "random" => {
            let (seed, index) = match rest.split_once(':') {
                Some((a, b)) => (a, b.parse().map_err(|_| bad("bad index"))?),
                None => (rest, 0),
            };
            let seed = seed.parse().map_err(|_| bad("bad seed"))?;
            Ok(InputFamily::new(Generator::Random, seed).case(index))
        }
        _ => Err(bad("unknown form; use delta, indicator, seq or random")),
    }
}

pub fn parse_generator(s: &str) -> Result<Generator> {
    match s {
        "delta" => Ok(Generator::Delta),
        "indicator" => Ok(Generator::Indicator),
        "ramp" => Ok(Generator::Ramp),
        "random" => Ok(Generator::Random),
        "monotone" => Ok(Generator::Monotone),
        _ => Err(Error::Precondition(format!("unknown family `{s}`"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn intervals() {
        let j = parse_interval("-4..4").unwrap();
        assert_eq!((j.lo(), j.hi()), (-4, 4));
        assert!(parse_interval("4..-4").is_err());
        assert!(parse_interval("4").is_err());
    }

    #[test]
    fn sequences() {
        assert_eq!(
            parse_sequence("delta:-3").unwrap(),
            FiniteSequence::delta(-3)
        );
        let x = parse_sequence("seq:-1:1,2.5,0").unwrap();
        assert_eq!(x.get(0), 2.5);
        assert_eq!(parse_sequence("indicator:0..3").unwrap().l1_norm(), 4.0);
        assert_eq!(
            parse_sequence("random:5").unwrap(),
            parse_sequence("random:5:0").unwrap()
        );
        assert!(parse_sequence("delta").is_err());
        assert!(parse_sequence("seq:0:a").is_err());
    }
}
