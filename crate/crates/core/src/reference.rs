//! Published reference eigenvalues and constants, kept as the exact decimal
//! strings they were printed with.

use crate::error::{Error, Result};

/// Significant digits compared in binary64, whatever the printed precision.
pub const MAX_COMPARED_DIGITS: usize = 15;

/// Embedded reference values as printed, one entry per benchmark id.
pub const TABLES: &[(&str, &[&str])] = &[
    ("square", &[
        "1294.9339795917128081703026479743085522513148",
        "5386.6565607779451709440883164319500534323747",
        "5386.6565607779451709440883164319500534323747",
        "11710.811238205718716479524026744165110548790",
        "17313.499721776700784267277477409032730611369",
        "17478.106551478646880691169158961070602062916",
        "27225.134042723468407942851261240075600133838",
        "27225.134042723468407942851261240075600133838",
        "44319.444997239644605551889845792194008818266",
        "44319.444997239644605551889845792194008818266",
    ]),
    ("lshape", &[
        "418.9752928519954616775618775449403",
        "690.9065117037020521173375432095840",
        "931.5792655819233500496763905727078",
        "1634.533781725410909450276640848249",
        "2090.839376830117972780944169183919",
        "3350.410627882138361796676879507818",
        "3720.925878799246215492176662379798",
        "4485.620042035762239796922517307530",
        "4560.432156327978825966680488256231",
        "5738.403842705743348891002113406246",
    ]),
    ("drums-ss", &[
        "10.36402107986949540721",
        "16.402184923407268356740",
        "36.28192141809921686643",
        "47.33781364226172710396",
        "61.23040947172451684072",
        "90.01373420512098390986",
        "119.052506025401956876870",
        "135.11181644660087949787",
        "152.2017047406288081819380",
        "187.12311642208418946283",
    ]),
    ("drums-clamped-left", &[
        "28.0586863865423000549087398",
        "42.80755796191819473005366012",
        "73.51576421441210956574548706",
        "109.355356090831716811598988",
        "123.8961882657907045115913099",
        "151.830513099492311414264541",
        "227.038626156347910723847312",
        "251.63057739930330617446625802",
        "290.252435400071762741097143187",
        "311.16810084585353295577573668",
    ]),
    ("drums-clamped-right", &[
        "25.01410502064436259175268775",
        "50.67098031228146895086815044",
        "72.0887124830690440717331005",
        "101.50786786148196218598065170",
        "119.568610048818932875544158",
        "162.5851723649249044594031075",
        "217.9878528191822288137668706",
        "263.6684022735138072395955186",
        "297.5045897085804999794427456",
        "315.5017873309864911264409052",
    ]),
    ("rect-hole", &[
        "0.10698498562334817102814013",
        "0.35605676603875088420438615",
        "0.94524070807442103593431671",
        "2.53208704546115218637535529",
        "3.99930885285784387075239865",
        "5.57646932761755697998226709",
        "6.43857726128711796898224149",
        "9.13840065843740557418337614",
        "16.4479467402360010159306274",
        "17.4245866515989760773466203",
    ]),
    ("triangle-equilateral-C-s0", &[
        "9804.9449874764568054397360472302",
    ]),
    ("triangle-right-isosceles-C-s0", &[
        "35185.638471713425529039119075",
    ]),
    ("triangle-90-60-30-C-s0", &[
        "55407.231456202639937488311240",
    ]),
    ("triangle-equilateral-S-s0", &[
        "2770.74747830051377028096946314538",
    ]),
    ("triangle-right-isosceles-S-s0", &[
        "9740.9091034002437236440332688705",
    ]),
    ("triangle-90-60-30-S-s0", &[
        "15085.180715191686082640833743",
    ]),
    ("triangle-equilateral-V-s0", &[
        "72.942664620393689247350334919683",
    ]),
    ("triangle-right-isosceles-V-s0", &[
        "142.9905816658059570843982031023",
    ]),
    ("triangle-90-60-30-V-s0", &[
        "120.61629780957915519675157481",
    ]),
    ("triangle-equilateral-M-s0", &[
        "185.10778102243532486304991536227",
    ]),
    ("triangle-right-isosceles-M-s0", &[
        "492.33162470634854919442608899",
    ]),
    ("triangle-90-60-30-M-s0", &[
        "391.7946452226036199316742042",
    ]),
    ("triangle-equilateral-C-s1", &[
        "146.412905109344790007913155148663",
    ]),
    ("triangle-right-isosceles-C-s1", &[
        "279.14825470003949590687643840",
    ]),
    ("triangle-90-60-30-C-s1", &[
        "352.12132391711858946305008173",
    ]),
    ("triangle-equilateral-S-s1", &[
        "52.6378901391432459671172853326728",
    ]),
    ("triangle-right-isosceles-S-s1", &[
        "98.696044010893586188344909998761",
    ]),
    ("triangle-90-60-30-S-s1", &[
        "122.82174365800090725660699910",
    ]),
    ("triangle-equilateral-V-s1", &[
        "9.86394388190996483130098955949938",
    ]),
    ("triangle-right-isosceles-V-s1", &[
        "8.37347027272868454327196355771",
    ]),
    ("triangle-90-60-30-V-s1", &[
        "8.5380950929242319268917035189",
    ]),
    ("triangle-equilateral-M-s1", &[
        "32.906393793581628348514192294762",
    ]),
    ("triangle-right-isosceles-M-s1", &[
        "36.63077785104390025356999314735",
    ]),
    ("triangle-90-60-30-M-s1", &[
        "33.45210121650411459840950230",
    ]),
    ("constant-c0-equilateral", &[
        "0.07350005475651561",
    ]),
    ("constant-c1-equilateral", &[
        "0.1743250725741249",
    ]),
    ("constant-c0-right-isosceles", &[
        "0.045068295511191264",
    ]),
    ("constant-c1-right-isosceles", &[
        "0.16522544473105152",
    ]),
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ReferenceEntry {
    /// Eigenvalue index, starting at 1.
    pub j: usize,
    pub text: &'static str,
}

impl ReferenceEntry {
    pub fn value(&self) -> f64 {
        self.text.parse().expect("embedded reference values are valid decimals")
    }

    /// Significant digits of the printed value.
    pub fn digits(&self) -> usize {
        self.text.chars().filter(char::is_ascii_digit).skip_while(|&c| c == '0').count()
    }

    /// Relative tolerance matching the printed digits, capped at binary64.
    pub fn tolerance(&self) -> f64 {
        10f64.powi(1 - self.digits().min(MAX_COMPARED_DIGITS) as i32)
    }
}

pub fn benchmark_ids() -> impl Iterator<Item = &'static str> {
    TABLES.iter().map(|(id, _)| *id)
}

pub fn benchmark(id: &str) -> Result<Vec<ReferenceEntry>> {
    TABLES
        .iter()
        .find(|(name, _)| *name == id)
        .map(|(_, v)| v.iter().enumerate().map(|(i, &text)| ReferenceEntry { j: i + 1, text }).collect())
        .ok_or_else(|| Error::InvalidInput(format!("unknown benchmark `{id}`")))
}

pub fn lookup(id: &str, j: usize) -> Result<ReferenceEntry> {
    let entries = benchmark(id)?;
    let n = entries.len();
    entries
        .into_iter()
        .find(|e| e.j == j)
        .ok_or_else(|| Error::InvalidInput(format!("benchmark `{id}` has entries 1..={n}, not {j}")))
}

pub fn value(id: &str, j: usize) -> Result<f64> {
    lookup(id, j).map(|e| e.value())
}

/// Id of a single-triangle entry, e.g. `triangle-equilateral-M-s0`.
pub fn triangle_id(shape: &str, space: char, s: u8) -> String {
    format!("triangle-{shape}-{space}-s{s}")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lookups() {
        assert_eq!(lookup("drums-clamped-left", 1).unwrap().text, "28.0586863865423000549087398");
        assert_eq!(value("square", 3).unwrap(), value("square", 2).unwrap());
        assert!(lookup("square", 11).is_err());
        assert!(benchmark("nosuch").is_err());
        assert_eq!(benchmark_ids().count(), TABLES.len());
        assert_eq!(value(&triangle_id("equilateral", 'M', 0), 1).unwrap(), 185.10778102243532);
    }

    #[test]
    fn table_shapes() {
        for id in ["square", "lshape", "drums-ss", "drums-clamped-left", "drums-clamped-right", "rect-hole"] {
            let e = benchmark(id).unwrap();
            assert_eq!(e.len(), 10);
            assert!(e.windows(2).all(|w| w[0].value() <= w[1].value()), "{id}");
        }
        assert_eq!(benchmark_ids().filter(|id| id.starts_with("triangle-")).count(), 24);
    }

    #[test]
    fn digits_and_tolerance() {
        let e = ReferenceEntry { j: 1, text: "0.10698498562334817102814013" };
        assert_eq!(e.digits(), 26);
        assert_eq!(e.tolerance(), 1e-14);
        let short = ReferenceEntry { j: 1, text: "0.1743250725741249" };
        assert_eq!(short.digits(), 16);
        // constants and eigenvalues agree in the printed digits
        let c1 = value("constant-c1-equilateral", 1).unwrap();
        let lam = value(&triangle_id("equilateral", 'M', 1), 1).unwrap();
        assert!((lam.powf(-0.5) - c1).abs() < 1e-10);
        for (c, shape, s) in [("c0", "equilateral", 0), ("c0", "right-isosceles", 0), ("c1", "right-isosceles", 1)] {
            let c = value(&format!("constant-{c}-{shape}"), 1).unwrap();
            let lam = value(&triangle_id(shape, 'M', s), 1).unwrap();
            assert!((lam.powf(-0.5) - c).abs() < 1e-10);
        }
    }
}
