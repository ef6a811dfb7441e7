# Copyright 2026 The egoqa Authors. All rights reserved.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     https://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Python bindings for the egoqa toolkit."""

import json as _json

from ._core import *  # noqa: F401,F403
from ._core import __version__, stats as _stats


def stats(input, output, narrations=None):
    """Dataset statistics as a dict; also written to `output`."""
    return _json.loads(_stats(input, output, narrations))
