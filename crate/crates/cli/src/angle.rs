//! Angles as decimal radians or π-fractions such as `pi/4`, `-3*pi/4`,
//! `2pi`.

use std::f64::consts::PI;

pub fn parse_angle(text: &str) -> Result<f64, String> {
    let s: String = text
        .chars()
        .filter(|c| !c.is_whitespace())
        .collect::<String>()
        .to_lowercase();
    if s.is_empty() {
        return Err("empty angle".into());
    }
    let value = match s.find("pi").or_else(|| s.find('π')) {
        None => s
            .parse::<f64>()
            .map_err(|_| format!("{text:?} is neither a number nor a multiple of pi"))?,
        Some(at) => {
            let token_len = if s[at..].starts_with("pi") {
                2
            } else {
                'π'.len_utf8()
            };
            let (head, tail) = (&s[..at], &s[at + token_len..]);
            let head = head.strip_suffix('*').unwrap_or(head);
            let factor = match head {
                "" | "+" => 1.0,
                "-" => -1.0,
                h => h
                    .parse::<f64>()
                    .map_err(|_| format!("{text:?}: bad multiplier {h:?}"))?,
            };
            let divisor = match tail {
                "" => 1.0,
                t => {
                    let d = t
                        .strip_prefix('/')
                        .ok_or_else(|| format!("{text:?}: expected '/' after pi"))?;
                    d.parse::<f64>()
                        .map_err(|_| format!("{text:?}: bad divisor {d:?}"))?
                }
            };
            if divisor == 0.0 {
                return Err(format!("{text:?}: division by zero"));
            }
            factor * PI / divisor
        }
    };
    if !value.is_finite() {
        return Err(format!("{text:?} is not finite"));
    }
    Ok(value)
}
