"""Validate GeoJSON exports with the `geojson` package (RFC 7946 checks).

usage: validate_geojson.py FILE...
Prints one line per feature: layer, position count, value count.
"""
import sys

import geojson


def main(paths):
    ok = True
    for path in paths:
        with open(path) as f:
            doc = geojson.load(f)
        errors = doc.errors()
        print(f"{path}: valid={doc.is_valid} errors={errors}")
        ok &= doc.is_valid
        for feat in doc.features:
            props = feat.properties
            print(
                f"  {props['layer']} positions={len(feat.geometry.coordinates)}"
                f" values={len(props.get('values', []))}"
            )
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main(sys.argv[1:]))
