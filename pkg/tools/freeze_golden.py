"""Regenerate the catalog golden files from the oracles (run once, then review the diff)."""

import json
import sys
from pathlib import Path

from hecke import farey
from hecke.catalog import catalog_dir
from hecke.congruence import image_group
from hecke.data import power5_pairings
from hecke.group import decompose, gen_S, gen_T
from hecke.ring import hecke_ring


def main(out: Path) -> None:
    symbols = {"eq31": farey.index_two_symbol(5), "pentagon": farey.power_q_symbol(5),
               "full": farey.full_group_symbol(5)}
    for name, sym in symbols.items():
        (out / f"{name}.hfs").write_text(farey.serialize_hfs(sym))
    lam = hecke_ring(5).lam
    orders = {str(m): image_group([gen_S(5), gen_T(5)], m).order for m in (1, lam + 2, 5)}
    golden = {
        "quotientOrders": orders,
        "example34Words": [decompose(g) for g in power5_pairings()],
        "invariants": {name: farey.invariants(sym).to_json() for name, sym in symbols.items()},
    }
    (out / "golden.json").write_text(json.dumps(golden, indent=2, sort_keys=True) + "\n")


if __name__ == "__main__":
    main(Path(sys.argv[1]) if len(sys.argv) > 1 else catalog_dir())
