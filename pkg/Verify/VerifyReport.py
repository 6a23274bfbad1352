"""
Copyright (c) 2026 The LinBridge developers.

Licensed under the MIT License (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at the root directory of this project.

See the License for the specific language governing permissions and
limitations under the License.
"""

__author__ = "LinBridge developers"

import json
import math

"""
VerifyReport collects named pass/fail checks. A check passes when its
statistic is finite and does not exceed its threshold; the report passes
when all of its checks do.
"""


class VerifyReport:
    def __init__(self, suite, model_hash=None, seed=None):
        self.suite = suite
        self.model_hash = model_hash
        self.seed = seed
        self.retried = False
        self.retry_seed = None
        self.checks = []

    def add_check(self, name, statistic, threshold, passed=None):
        """
        Record a check.

        :param name: unique check name
        :param statistic: the measured value (None for errors)
        :param threshold: the largest acceptable statistic
        :param passed: overrides the statistic <= threshold rule
        :return: the check dictionary
        """
        if passed is None:
            passed = statistic is not None and \
                math.isfinite(statistic) and statistic <= threshold

        check = {'name': name,
                 'statistic': None if statistic is None else float(statistic),
                 'threshold': float(threshold),
                 'passed': bool(passed)}
        self.checks.append(check)
        return check

    def add_error(self, name, error):
        """
        Record an exception raised while running a check as a failed check.
        """
        check = self.add_check(name, None, 0.0, passed=False)
        check['error'] = '%s: %s' % (type(error).__name__, error)
        return check

    def extend(self, other):
        self.checks.extend(other.checks)

    @property
    def passed(self):
        return all(c['passed'] for c in self.checks)

    def failures(self):
        return [c for c in self.sorted_checks() if not c['passed']]

    def sorted_checks(self):
        return sorted(self.checks, key=lambda c: c['name'])

    def max_statistic(self, prefix=''):
        values = [c['statistic'] for c in self.checks
                  if c['name'].startswith(prefix) and
                  c['statistic'] is not None]
        return max(values) if values else None

    def to_dict(self):
        return {'suite': self.suite,
                'passed': self.passed,
                'model_hash': self.model_hash,
                'seed': self.seed,
                'retried': self.retried,
                'retry_seed': self.retry_seed,
                'checks': self.sorted_checks()}

    def to_json(self):
        data = self.to_dict()
        checks = []
        for check in data['checks']:
            check = dict(check)
            # null keeps the output valid JSON
            if check['statistic'] is not None and \
                    not math.isfinite(check['statistic']):
                check['statistic'] = None
            checks.append(check)
        data['checks'] = checks
        return json.dumps(data, indent=2)

    def __repr__(self):
        return 'VerifyReport(%s, %d checks, %s)' % (
            self.suite, len(self.checks), 'PASS' if self.passed else 'FAIL')
