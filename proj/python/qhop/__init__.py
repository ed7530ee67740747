# Copyright 2026 The qhop Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Python bindings for the qhop numerical library."""

import json as _json

from qhop._qhop import *  # noqa: F401,F403
from qhop._qhop import _estimate, _run_csv


def run_csv(subcommand, config=None, timing=False):
    """Runs a study and returns its CSV text."""
    return _run_csv(subcommand, _json.dumps(config or {}), timing)


def estimate(config=None):
    """Returns one resource-estimate record per method."""
    return [_json.loads(r) for r in _estimate(_json.dumps(config or {}))]
