use std::io::Write;

use crate::sweep::ResultRow;

pub const HEADER: [&str; 4] = ["param", "p_even", "p_odd", "p_success"];
pub const MC_HEADER: [&str; 4] = ["mc_p_even", "mc_se_even", "mc_p_odd", "mc_se_odd"];

/// Writes rows in grid order. Floats use the shortest representation that
/// parses back to the same value. MC columns appear iff the first row has them.
pub fn write_csv<W: Write>(out: W, rows: &[ResultRow]) -> csv::Result<()> {
    let with_mc = rows.first().is_some_and(|r| r.mc.is_some());
    let mut w = csv::Writer::from_writer(out);
    let mut header: Vec<&str> = HEADER.to_vec();
    if with_mc {
        header.extend(MC_HEADER);
    }
    w.write_record(&header)?;
    for r in rows {
        let mut rec = vec![
            r.param.to_string(),
            r.p_even.to_string(),
            r.p_odd.to_string(),
            r.p_success.to_string(),
        ];
        if let (true, Some(m)) = (with_mc, r.mc) {
            rec.extend([m.p_even, m.se_even, m.p_odd, m.se_odd].map(|x| x.to_string()));
        }
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}
