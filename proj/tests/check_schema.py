"""Check scene files against docs/scene-schema.json."""

import glob
import json
import os
import sys

import jsonschema


def main(schema_path, scene_dir):
    with open(schema_path) as f:
        schema = json.load(f)
    jsonschema.Draft202012Validator.check_schema(schema)
    validator = jsonschema.Draft202012Validator(schema)
    files = sorted(glob.glob(os.path.join(scene_dir, "*.scene.json")))
    if not files:
        print(f"no scene files in {scene_dir}")
        return 1
    failed = 0
    for path in files:
        with open(path) as f:
            errors = list(validator.iter_errors(json.load(f)))
        for e in errors[:5]:
            print(f"{path}: {e.json_path}: {e.message}")
        failed += bool(errors)
    print(f"{len(files)} files, {failed} not matching the schema")
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main(sys.argv[1], sys.argv[2]))
