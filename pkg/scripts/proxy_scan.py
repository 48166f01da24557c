"""Scan the approximation-quality proxies over a range of d and report the extremes."""
import argparse
import json
from dataclasses import asdict, dataclass
from pathlib import Path

from recsquares.analysis import lemma313_scan


@dataclass
class ProxyConfig:
    d_min: int = 2
    d_max: int = 1000
    precision: int = 64
    out: Path | None = None


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    cfg = ProxyConfig()
    for name, default in asdict(cfg).items():
        parser.add_argument(f"--{name.replace('_', '-')}", type=type(default) if default is not None else Path, default=default)
    cfg = ProxyConfig(**vars(parser.parse_args()))

    rep = lemma313_scan(cfg.d_min, cfg.d_max, cfg.precision)
    summary = {
        "config": {k: str(v) for k, v in asdict(cfg).items()},
        "records": rep.records,
        "min_E": asdict(rep.min_E) if rep.min_E else None,
        "min_proxy_e": asdict(rep.min_proxy_e) if rep.min_proxy_e else None,
        "min_proxy_q": asdict(rep.min_proxy_q) if rep.min_proxy_q else None,
        "E_below_one": [asdict(r) for r in rep.small_E],
        "violations": [asdict(r) for r in rep.violations],
        "gn_mismatches": rep.gn_mismatches,
    }
    text = json.dumps(summary, indent=2)
    if cfg.out:
        cfg.out.write_text(text + "\n")
    print(text)


if __name__ == "__main__":
    main()
