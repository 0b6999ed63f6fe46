#!/usr/bin/env python
# -*- coding: utf-8 -*-

__all__ = ['faquad', 'invariant', 'schedule']
