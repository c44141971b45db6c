//! Parsers for the compact flag syntaxes.

use randrep::exact::Effect;
use randrep::{Error, PValueKind, Result};

fn usage(msg: String) -> Error {
    Error::Config(msg)
}

/// `"-0.2121x5,1x5,inf"`: comma-separated values, each optionally repeated with `xN`.
pub fn parse_theta(spec: &str) -> Result<Vec<Effect>> {
    let mut out = Vec::new();
    for token in spec.split(',') {
        let token = token.trim();
        let (value, count) = match token.rsplit_once('x') {
            Some((v, c)) => (
                v,
                c.parse::<usize>()
                    .map_err(|_| usage(format!("bad repeat count in `{token}`")))?,
            ),
            None => (token, 1),
        };
        let effect = match value {
            "inf" | "+inf" => Effect::PlusInfinity,
            v => {
                let x: f64 = v
                    .parse()
                    .map_err(|_| usage(format!("bad effect `{v}`")))?;
                if !x.is_finite() {
                    return Err(usage(format!("effect `{v}` must be finite or inf")));
                }
                Effect::Finite(x)
            }
        };
        out.extend(std::iter::repeat_n(effect, count));
    }
    Ok(out)
}

/// `"a:b:step"`, inclusive of `b` up to rounding.
pub fn parse_sweep(spec: &str) -> Result<Vec<f64>> {
    let parts: Vec<f64> = spec
        .split(':')
        .map(|p| p.trim().parse::<f64>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| usage(format!("bad sweep `{spec}`, expected a:b:step")))?;
    let [a, b, step] = parts[..] else {
        return Err(usage(format!("bad sweep `{spec}`, expected a:b:step")));
    };
    if !(step > 0.0) || b < a {
        return Err(usage(format!("empty sweep `{spec}`")));
    }
    let count = ((b - a) / step + 1e-9).floor() as usize + 1;
    Ok((0..count).map(|i| a + i as f64 * step).collect())
}

pub fn parse_kinds(spec: &str) -> Result<Vec<PValueKind>> {
    spec.split(',').map(str::parse).collect()
}
