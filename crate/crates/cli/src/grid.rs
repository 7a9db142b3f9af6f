/// Parses `a:b`, `a:b:step` (inclusive, step defaults to 1) or `x,y,z`.
pub fn parse(spec: &str) -> Result<Vec<f64>, String> {
    let num = |s: &str| {
        s.trim()
            .parse::<f64>()
            .map_err(|_| format!("invalid number {s:?} in grid {spec:?}"))
    };
    let values = if spec.contains(':') {
        let parts: Vec<&str> = spec.split(':').collect();
        let (start, end, step) = match parts.as_slice() {
            [a, b] => (num(a)?, num(b)?, 1.0),
            [a, b, s] => (num(a)?, num(b)?, num(s)?),
            _ => return Err(format!("grid {spec:?} must be a:b or a:b:step")),
        };
        if step.is_nan() || step <= 0.0 || end < start {
            return Err(format!("grid {spec:?} needs a positive step and end >= start"));
        }
        let count = ((end - start) / step + 1e-9).floor() as usize + 1;
        (0..count).map(|i| start + i as f64 * step).collect()
    } else {
        spec.split(',').map(num).collect::<Result<Vec<_>, _>>()?
    };
    if values.is_empty() || values.iter().any(|v| !v.is_finite() || *v <= 0.0) {
        return Err(format!("grid {spec:?} must contain positive values"));
    }
    Ok(values)
}
