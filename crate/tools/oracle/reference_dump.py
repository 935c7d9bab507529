#!/usr/bin/env python3
"""Dump what pyulog decodes from a .ulg file as canonical JSON.

The output is frozen next to the log as <name>.oracle.json and compared
against skytrace-core by crates/core/tests/conformance.rs. Column values
are summarised by the SHA-256 of their little-endian wire bytes, so the
comparison is bit-exact for both integers and floats.

usage: reference_dump.py LOG.ulg [LOG.ulg ...]
"""
import hashlib
import json
import pathlib
import sys

import numpy as np
import pyulog


def column_digest(values):
    arr = np.ascontiguousarray(values)
    arr = arr.astype(arr.dtype.newbyteorder("<"), copy=False)
    return hashlib.sha256(arr.tobytes()).hexdigest()


def scalar(v):
    if isinstance(v, (bytes, bytearray)):
        return v.hex()
    if isinstance(v, (np.floating, float)):
        return float(v)
    if isinstance(v, (np.integer, int)):
        return int(v)
    return str(v)


def valid_fix_count(ulog):
    for d in ulog.data_list:
        if d.name == "vehicle_gps_position" and d.multi_id == 0:
            lat, lon = d.data["lat"], d.data["lon"]
            ok = ~((lat == 0) & (lon == 0))
            if "fix_type" in d.data:
                ok &= d.data["fix_type"] >= 3
            first = None
            if ok.any():
                i = int(np.argmax(ok))
                first = [int(lat[i]), int(lon[i])]
            return {"records": len(lat), "valid": int(ok.sum()), "first_valid_e7": first}
    return None


def dump(path):
    ulog = pyulog.ULog(str(path))
    series = []
    for d in sorted(ulog.data_list, key=lambda d: (d.name, d.multi_id)):
        ts = d.data["timestamp"]
        series.append(
            {
                "name": d.name,
                "multi_id": d.multi_id,
                "count": int(len(ts)),
                "first_timestamp": int(ts[0]),
                "last_timestamp": int(ts[-1]),
                "fields": [[f.field_name, f.type_str] for f in d.field_data],
                "digests": {f.field_name: column_digest(d.data[f.field_name]) for f in d.field_data},
            }
        )
    return {
        "file": path.name,
        "start_timestamp": int(ulog.start_timestamp),
        "last_timestamp": int(ulog.last_timestamp),
        "duration_us": int(ulog.last_timestamp - ulog.start_timestamp),
        "file_corruption": bool(ulog.file_corruption),
        "series": series,
        "attribute_count": sum(len(s["fields"]) for s in series),
        "parameters": {k: scalar(v) for k, v in sorted(ulog.initial_parameters.items())},
        "changed_parameters": [[int(t), k, scalar(v)] for t, k, v in ulog.changed_parameters],
        "info_keys": sorted(ulog.msg_info_dict.keys()),
        "logged_messages": [
            [int(m.timestamp), int(m.log_level), m.message] for m in ulog.logged_messages
        ],
        "tagged_logged_messages": sum(len(v) for v in ulog.logged_messages_tagged.values()),
        "dropouts": [[int(d.timestamp), int(d.duration)] for d in ulog.dropouts],
        "gps": valid_fix_count(ulog),
    }


def main():
    for arg in sys.argv[1:]:
        path = pathlib.Path(arg)
        out = path.with_suffix(".oracle.json")
        out.write_text(json.dumps(dump(path), indent=1, sort_keys=True) + "\n")
        print(out)


if __name__ == "__main__":
    main()
