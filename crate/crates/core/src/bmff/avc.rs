//! AVC decoder configuration (`avcC`) profile and level.

use std::fmt;

/// Opaque suffix some analyzers append to a Main-profile rendering.
pub const MAIN_SUFFIX: &str = "@Main";

const CONSTRAINT_SET3: u8 = 0x10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AvcProfile {
    Baseline,
    Main,
    High,
    Other(u8),
}

impl AvcProfile {
    pub fn from_indication(idc: u8) -> Self {
        match idc {
            66 => AvcProfile::Baseline,
            77 => AvcProfile::Main,
            100 => AvcProfile::High,
            other => AvcProfile::Other(other),
        }
    }

    pub fn indication(self) -> u8 {
        match self {
            AvcProfile::Baseline => 66,
            AvcProfile::Main => 77,
            AvcProfile::High => 100,
            AvcProfile::Other(v) => v,
        }
    }

    fn name(self) -> String {
        match self {
            AvcProfile::Baseline => "Baseline".into(),
            AvcProfile::Main => "Main".into(),
            AvcProfile::High => "High".into(),
            AvcProfile::Other(88) => "Extended".into(),
            AvcProfile::Other(110) => "High 10".into(),
            AvcProfile::Other(122) => "High 4:2:2".into(),
            AvcProfile::Other(244) => "High 4:4:4 Predictive".into(),
            AvcProfile::Other(v) => format!("Profile{v}"),
        }
    }

    fn from_name(s: &str) -> Option<Self> {
        match s {
            "Baseline" => Some(AvcProfile::Baseline),
            "Main" => Some(AvcProfile::Main),
            "High" => Some(AvcProfile::High),
            _ => None,
        }
    }
}

/// Profile, level and optional constraint suffix of an AVC stream.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AvcSignal {
    pub profile: AvcProfile,
    /// `level_idc`, i.e. ten times the level number.
    pub level_idc: u8,
    pub constraint_suffix: Option<String>,
}

impl AvcSignal {
    /// Read the first four bytes of an `AVCDecoderConfigurationRecord`.
    pub fn from_avcc(record: &[u8]) -> Option<Self> {
        if record.len() < 4 || record[0] != 1 || record[3] == 0 {
            return None;
        }
        let profile = AvcProfile::from_indication(record[1]);
        let compat = record[2];
        let level_idc = record[3];
        let constraint_suffix = (profile == AvcProfile::Main
            && level_idc != 11
            && compat & CONSTRAINT_SET3 != 0)
            .then(|| MAIN_SUFFIX.to_string());
        Some(AvcSignal {
            profile,
            level_idc,
            constraint_suffix,
        })
    }

    /// Parse a rendering such as `High@L4` or `Main@L4@Main`.
    pub fn parse(s: &str) -> Option<Self> {
        let (profile, rest) = s.split_once("@L")?;
        let profile = AvcProfile::from_name(profile)?;
        let (level, suffix) = match rest.find('@') {
            Some(i) => (&rest[..i], Some(rest[i..].to_string())),
            None => (rest, None),
        };
        let level_idc = match level.split_once('.') {
            Some((major, minor)) if minor.len() == 1 => {
                major.parse::<u8>().ok()?.checked_mul(10)?.checked_add(minor.parse().ok()?)?
            }
            Some(_) => return None,
            None => level.parse::<u8>().ok()?.checked_mul(10)?,
        };
        if level_idc == 0 {
            return None;
        }
        Some(AvcSignal {
            profile,
            level_idc,
            constraint_suffix: suffix,
        })
    }

    /// Profile compatibility byte that reproduces this signal when read back.
    /// `None` when the suffix cannot be expressed.
    pub fn compatibility_byte(&self) -> Option<u8> {
        match self.constraint_suffix.as_deref() {
            None => Some(0),
            Some(MAIN_SUFFIX) if self.profile == AvcProfile::Main && self.level_idc != 11 => {
                Some(CONSTRAINT_SET3)
            }
            Some(_) => None,
        }
    }

    pub fn level_string(&self) -> String {
        let (major, minor) = (self.level_idc / 10, self.level_idc % 10);
        if minor == 0 {
            major.to_string()
        } else {
            format!("{major}.{minor}")
        }
    }
}

impl fmt::Display for AvcSignal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}@L{}", self.profile.name(), self.level_string())?;
        if let Some(s) = &self.constraint_suffix {
            f.write_str(s)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn avcc(profile: u8, compat: u8, level: u8) -> [u8; 7] {
        [1, profile, compat, level, 0xff, 0xe0, 0]
    }

    #[test]
    fn renders_table_strings() {
        let cases = [
            (66, 0, 31, "Baseline@L3.1"),
            (77, 0x40, 40, "Main@L4"),
            (100, 0, 41, "High@L4.1"),
            (100, 0, 21, "High@L2.1"),
            (66, 0xc0, 30, "Baseline@L3"),
            (77, 0x50, 40, "Main@L4@Main"),
        ];
        for (p, c, l, want) in cases {
            assert_eq!(AvcSignal::from_avcc(&avcc(p, c, l)).unwrap().to_string(), want);
        }
    }

    #[test]
    fn suffix_only_on_main() {
        let s = AvcSignal::from_avcc(&avcc(100, 0x10, 40)).unwrap();
        assert_eq!(s.to_string(), "High@L4");
    }

    #[test]
    fn rejects_bad_records() {
        assert!(AvcSignal::from_avcc(&[1, 66]).is_none());
        assert!(AvcSignal::from_avcc(&[0, 66, 0, 30]).is_none());
        assert!(AvcSignal::from_avcc(&[1, 66, 0, 0]).is_none());
    }

    #[test]
    fn parse_round_trips() {
        for s in ["Baseline@L4.1", "Main@L4@Main", "High@L4", "Main@L2.1", "High@L3"] {
            let sig = AvcSignal::parse(s).unwrap();
            assert_eq!(sig.to_string(), s);
            let rec = [1, sig.profile.indication(), sig.compatibility_byte().unwrap(), sig.level_idc];
            assert_eq!(AvcSignal::from_avcc(&rec).unwrap(), sig);
        }
        assert!(AvcSignal::parse("Ultra@L4").is_none());
        assert!(AvcSignal::parse("High@L4.12").is_none());
        assert!(AvcSignal::parse("High@L0").is_none());
        assert_eq!(AvcSignal::parse("High@L4@Tier").unwrap().compatibility_byte(), None);
    }

    #[test]
    fn unusual_profiles_have_names() {
        assert_eq!(AvcSignal::from_avcc(&avcc(110, 0, 40)).unwrap().to_string(), "High 10@L4");
        assert_eq!(AvcSignal::from_avcc(&avcc(9, 0, 40)).unwrap().to_string(), "Profile9@L4");
    }
}
