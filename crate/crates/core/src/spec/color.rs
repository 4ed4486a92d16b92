//! Color canonicalization: every color compares as lowercase `#rrggbb`.

const NAMED: &[(&str, &str)] = &[
    // single-letter shorthands of the reference plotting stack
    ("b", "#0000ff"),
    ("g", "#008000"),
    ("r", "#ff0000"),
    ("c", "#00bfbf"),
    ("m", "#bf00bf"),
    ("y", "#bfbf00"),
    ("k", "#000000"),
    ("w", "#ffffff"),
    // default qualitative cycle
    ("tab:blue", "#1f77b4"),
    ("tab:orange", "#ff7f0e"),
    ("tab:green", "#2ca02c"),
    ("tab:red", "#d62728"),
    ("tab:purple", "#9467bd"),
    ("tab:brown", "#8c564b"),
    ("tab:pink", "#e377c2"),
    ("tab:gray", "#7f7f7f"),
    ("tab:grey", "#7f7f7f"),
    ("tab:olive", "#bcbd22"),
    ("tab:cyan", "#17becf"),
    // CSS names
    ("black", "#000000"),
    ("white", "#ffffff"),
    ("red", "#ff0000"),
    ("green", "#008000"),
    ("blue", "#0000ff"),
    ("yellow", "#ffff00"),
    ("cyan", "#00ffff"),
    ("magenta", "#ff00ff"),
    ("orange", "#ffa500"),
    ("purple", "#800080"),
    ("brown", "#a52a2a"),
    ("pink", "#ffc0cb"),
    ("gray", "#808080"),
    ("grey", "#808080"),
    ("lightgray", "#d3d3d3"),
    ("lightgrey", "#d3d3d3"),
    ("darkgray", "#a9a9a9"),
    ("darkgrey", "#a9a9a9"),
    ("olive", "#808000"),
    ("navy", "#000080"),
    ("teal", "#008080"),
    ("maroon", "#800000"),
    ("lime", "#00ff00"),
    ("gold", "#ffd700"),
    ("silver", "#c0c0c0"),
    ("skyblue", "#87ceeb"),
    ("lightblue", "#add8e6"),
    ("darkblue", "#00008b"),
    ("darkgreen", "#006400"),
    ("lightgreen", "#90ee90"),
    ("darkred", "#8b0000"),
    ("salmon", "#fa8072"),
    ("coral", "#ff7f50"),
    ("tomato", "#ff6347"),
    ("crimson", "#dc143c"),
    ("indigo", "#4b0082"),
    ("violet", "#ee82ee"),
    ("orchid", "#da70d6"),
    ("steelblue", "#4682b4"),
    ("royalblue", "#4169e1"),
    ("seagreen", "#2e8b57"),
    ("forestgreen", "#228b22"),
    ("chocolate", "#d2691e"),
    ("tan", "#d2b48c"),
    ("beige", "#f5f5dc"),
    ("turquoise", "#40e0d0"),
    ("khaki", "#f0e68c"),
    ("lavender", "#e6e6fa"),
];

/// Resolves a color string to lowercase 6-digit hex.
///
/// Accepts `#rgb`, `#rrggbb`, `#rrggbbaa` (alpha dropped) and the built-in
/// names. Returns `None` for anything else.
pub fn canonical_color(raw: &str) -> Option<String> {
    let s = raw.trim().to_ascii_lowercase();
    if let Some(hex) = s.strip_prefix('#') {
        if !hex.bytes().all(|b| b.is_ascii_hexdigit()) {
            return None;
        }
        return match hex.len() {
            3 => Some(hex.chars().flat_map(|c| [c, c]).fold(String::from("#"), |mut acc, c| {
                acc.push(c);
                acc
            })),
            6 => Some(format!("#{hex}")),
            8 => Some(format!("#{}", &hex[..6])),
            _ => None,
        };
    }
    NAMED.iter().find(|(name, _)| *name == s).map(|(_, hex)| hex.to_string())
}

/// True when `s` is already in canonical form.
pub fn is_canonical_color(s: &str) -> bool {
    s.len() == 7 && s.starts_with('#') && s[1..].bytes().all(|b| matches!(b, b'0'..=b'9' | b'a'..=b'f'))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn forms() {
        assert_eq!(canonical_color("#1F77B4").as_deref(), Some("#1f77b4"));
        assert_eq!(canonical_color("#abc").as_deref(), Some("#aabbcc"));
        assert_eq!(canonical_color("#1f77b4cc").as_deref(), Some("#1f77b4"));
        assert_eq!(canonical_color("tab:blue").as_deref(), Some("#1f77b4"));
        assert_eq!(canonical_color(" Red ").as_deref(), Some("#ff0000"));
        assert_eq!(canonical_color("#12345"), None);
        assert_eq!(canonical_color("#gggggg"), None);
        assert_eq!(canonical_color("chartreuse-ish"), None);
    }

    #[test]
    fn table_is_canonical() {
        for (_, hex) in NAMED {
            assert!(is_canonical_color(hex), "{hex}");
        }
        assert!(!is_canonical_color("#1F77B4"));
    }
}
