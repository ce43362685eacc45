//! Channel argument parsing: builtin families by name or a Kraus JSON file.

use ftcap_core::QuantumChannel;

/// Parse a channel argument. Builtins: `identity`, `depolarizing(x)`,
/// `dephasing(x)`, `erasure(x)`, `fully-depolarizing`. Anything else is
/// treated as a path to a channel JSON file.
pub fn parse_channel(spec: &str) -> Result<QuantumChannel, String> {
    let s = spec.trim();
    if s == "identity" {
        return Ok(QuantumChannel::identity(2));
    }
    if s == "fully-depolarizing" {
        return Ok(QuantumChannel::fully_depolarizing());
    }
    for (name, ctor) in [
        (
            "depolarizing",
            QuantumChannel::depolarizing as fn(f64) -> QuantumChannel,
        ),
        (
            "dephasing",
            QuantumChannel::dephasing as fn(f64) -> QuantumChannel,
        ),
        (
            "erasure",
            QuantumChannel::erasure as fn(f64) -> QuantumChannel,
        ),
    ] {
        if let Some(rest) = s.strip_prefix(name) {
            let inner = rest
                .strip_prefix('(')
                .and_then(|r| r.strip_suffix(')'))
                .ok_or_else(|| format!("expected {name}(<lambda>), got '{s}'"))?;
            let lambda: f64 = inner
                .parse()
                .map_err(|_| format!("bad parameter '{inner}' in '{s}'"))?;
            if !(0.0..=1.0).contains(&lambda) {
                return Err(format!("{name} parameter {lambda} outside [0,1]"));
            }
            return Ok(ctor(lambda));
        }
    }
    let text = std::fs::read_to_string(s).map_err(|e| format!("cannot read '{s}': {e}"))?;
    QuantumChannel::from_json_str(&text).map_err(|e| format!("invalid channel file '{s}': {e}"))
}
