"""
Pipeline nodes: analyzer (detect, plan), supervisor (estimate), runner
(execute), reporter (score)
"""
